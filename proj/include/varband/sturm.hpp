#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "varband/numerics.hpp"
#include "varband/profile.hpp"

namespace varband {

// Values and fluxes p*phi' of the toy pair phi_+, phi_-.
struct ToyFundamental {
  cplx phi_plus;
  cplx phi_minus;
  cplx flux_plus;
  cplx flux_minus;
};

ToyFundamental toy_fundamental_full(double p_minus, double p_plus, double lambda, double x);
std::array<cplx, 2> toy_fundamental(double p_minus, double p_plus, double lambda, double x);

// diag(sqrt p-, sqrt p+) / (pi (sqrt p- + sqrt p+)^2 sqrt(lambda)).
std::array<double, 2> toy_spectral_density(double p_minus, double p_plus, double lambda);

// W(f, g) = f (p g') - (p f') g.
cplx wronskian(cplx f, cplx flux_f, cplx g, cplx flux_g);

struct EigenInit {
  double x0 = 0.0;
  cplx phi = 1.0;
  cplx flux = 0.0;
};

// RK4 solution of (phi, p phi')' = (p phi' / p, -lambda phi) on a grid that
// contains every profile knot.
class EigenSolution {
 public:
  EigenSolution(BandwidthProfile profile, double lambda, std::vector<double> xs, std::vector<cplx> phi,
                std::vector<cplx> flux);

  double lambda() const { return lambda_; }
  const std::vector<double>& grid() const { return xs_; }
  const std::vector<cplx>& phi_values() const { return phi_; }
  const std::vector<cplx>& flux_values() const { return flux_; }

  cplx phi(double x) const;
  cplx flux(double x) const;

  void write_csv(std::ostream& os) const;

 private:
  std::size_t segment(double x) const;

  BandwidthProfile profile_;
  double lambda_;
  std::vector<double> xs_;
  std::vector<cplx> phi_;
  std::vector<cplx> flux_;
};

// Step limit: a twentieth of the shortest local wavelength 2 pi sqrt(p/lambda).
double max_stable_step(const BandwidthProfile& profile, double lambda);
double default_step(const BandwidthProfile& profile, double lambda);

EigenSolution solve_eigen(const BandwidthProfile& profile, double lambda, const EigenInit& init,
                          const Interval& span, double step);

}  // namespace varband
