#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "varband/numerics.hpp"
#include "varband/profile.hpp"

namespace varband {

// Compactly supported potential q of B_q = -D^2 + q, q = 0 outside [-a, a].
class Potential {
 public:
  static Potential zero();
  // q = depth on [-radius, radius]; negative depth is a well.
  static Potential square_well(double depth, double radius);
  // q(zeta(x)) = p''/4 - p'^2/(16 p) for a smooth eventually constant p.
  static Potential from_profile(const BandwidthProfile& profile);
  static Potential custom(std::function<double(double)> q, double radius, std::string name);

  double radius() const { return radius_; }
  bool is_zero() const { return !q_; }
  const std::string& name() const { return name_; }
  double operator()(double s) const;
  // Smallest interval known to contain supp q.
  Interval support() const { return support_; }

 private:
  Potential(std::function<double(double)> q, double radius, Interval support, std::string name);
  std::function<double(double)> q_;
  double radius_ = 0.0;
  Interval support_;
  std::string name_;
};

struct ScatteringData {
  double omega = 0.0;
  cplx T;
  cplx R1;
  cplx R2;
  // Transmission recomputed from the right-incident solution; equals T up to
  // integration error.
  cplx T_right;

  double unitarity_defect() const;
};

struct ScatteringOptions {
  double max_step = 0.01;
  // Steps per 2 pi at the largest frequency.
  double steps_per_wavelength = 400.0;
};

// Phi(omega, .) for one omega: closed-form plane-wave tails outside the support of q,
// Hermite interpolation of the integrated real fundamental pair inside.
class ScatteringSolution {
 public:
  double omega() const { return data_.omega; }
  const ScatteringData& data() const { return data_; }
  double radius() const { return a_; }

  std::array<cplx, 2> value(double x) const;
  std::array<cplx, 2> derivative(double x) const;
  // Integral of Phi_j over [lo, hi].
  std::array<cplx, 2> integral(double lo, double hi) const;

 private:
  friend class ScatteringSolver;
  struct Real2 {
    double u, v;
  };
  Real2 interior(double x, int what) const;
  std::array<cplx, 2> tail_integral(double lo, double hi) const;
  double primitive(double x, bool use_v) const;

  ScatteringData data_;
  double a_ = 0.0, lo_ = 0.0, hi_ = 0.0;
  double h_ = 0.0;
  std::shared_ptr<const std::vector<double>> q_nodes_;
  std::vector<double> u_, du_, v_, dv_, cu_, cv_;
  cplx c1u_, c1v_, c2u_, c2v_;  // Phi_1 = c1u u + c1v v, Phi_2 = c2u u + c2v v inside
};

class ScatteringSolver {
 public:
  ScatteringSolver(Potential q, double omega_max, ScatteringOptions opts = {});

  const Potential& potential() const { return q_; }
  double step() const { return h_; }
  std::size_t steps() const { return n_; }
  double omega_max() const { return omega_max_; }

  ScatteringSolution solve(double omega) const;

 private:
  Potential q_;
  double omega_max_;
  double a_, lo_, hi_;
  double h_ = 0.0;
  std::size_t n_ = 0;
  std::shared_ptr<const std::vector<double>> q_nodes_;
  std::vector<double> q_mid_;
};

ScatteringData scattering_coeffs(const Potential& q, double omega, const ScatteringOptions& opts = {});
std::array<cplx, 2> scattering_solution(const Potential& q, double omega, double x,
                                        const ScatteringOptions& opts = {});

void write_scattering_csv(std::ostream& os, const std::vector<ScatteringData>& rows);

}  // namespace varband
