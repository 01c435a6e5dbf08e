#pragma once

#include <iosfwd>
#include <memory>
#include <variant>
#include <vector>

#include "varband/spectral.hpp"

namespace varband {

struct ToyClosedForm {
  double p_minus = 1.0;
  double p_plus = 1.0;
  double Omega = 1.0;
};

struct HalfLineLimit {
  double Omega = 1.0;
};

struct SchrodingerQuadrature {
  std::shared_ptr<const SchrodingerSpectralModel> model;
};

struct LiouvillePullback {
  std::shared_ptr<const LiouvilleSpectralModel> model;
};

// Direct quadrature of sigma^2 sum m Phi(x) conj Phi(y) for any model.
struct SpectralSum {
  ModelPtr model;
};

using KernelModel = std::variant<ToyClosedForm, HalfLineLimit, SchrodingerQuadrature, LiouvillePullback, SpectralSum>;

double toy_kernel(double p_minus, double p_plus, double Omega, double x, double y);
double halfline_kernel(double Omega, double x, double y);

struct KernelOptions {
  bool fast_path = true;
  bool check_resolution = true;
  double imag_tolerance = 1e-9;
};

struct KernelValue {
  cplx value;
  bool imaginary_flag = false;  // residue above imag_tolerance was kept
  bool fast_path = false;
};

// (1/2pi) sum w Phi(x) conj Phi(y); asymptotic scattering form when both
// |x|, |y| exceed the support radius. Throws UnderResolved when the spectral
// grid is too coarse for max(|x|, |y|, a).
KernelValue schrodinger_kernel_eval(const SchrodingerSpectralModel& model, double x, double y,
                                    const KernelOptions& opts = {});
cplx schrodinger_kernel(const SchrodingerSpectralModel& model, double x, double y, const KernelOptions& opts = {});
// Kernel from the asymptotic form only; requires |x|, |y| >= a.
double schrodinger_kernel_asymptotic(const SchrodingerSpectralModel& model, double x, double y);

// p(x)^{-1/4} p(y)^{-1/4} h(zeta(x), zeta(y)).
cplx sl_kernel(const LiouvilleSpectralModel& model, double x, double y, const KernelOptions& opts = {});

cplx spectral_sum_kernel(const SpectralModel& model, double x, double y);

cplx kernel(const KernelModel& model, double x, double y);
double kernel_diagonal(const KernelModel& model, double y);

// Fixed-x kernel row y -> k(x, y); amortizes Phi(x) for quadrature models.
class KernelRow {
 public:
  KernelRow(const KernelModel& model, double x);
  cplx operator()(double y) const;

 private:
  const KernelModel* model_;
  double x_;
  const SpectralModel* spectral_ = nullptr;
  std::vector<cplx> coeff_;
  mutable std::vector<cplx> scratch_;
};

double kernel_tail_mass(const KernelModel& model, double x, double b, const Interval& window);

struct LocalizationScan {
  std::vector<double> radii;
  std::vector<double> tail;
  double diagonal = 0.0;
  double radius = -1.0;  // smallest scanned b with tail < rel_tol * k(x,x); -1 if none
};

LocalizationScan localization_radius(const KernelModel& model, double x, const Interval& window,
                                     const std::vector<double>& radii, double rel_tol = 1e-2);

double diagonal_average(const KernelModel& model, const Interval& I);
double diagonal_sup(const KernelModel& model, const Interval& I, std::size_t points = 2001);

// Terms of the diagonal-average deviation bound for a scattering model.
struct DiagonalBound {
  double reflection_norm = 0.0;  // ||R1 1_{Lambda^{1/2}}||_{L2(dw)}
  double reflection_term = 0.0;  // (2/sqrt(pi)) ||R1|| / |I|^{1/2}
  double core_term = 0.0;        // (1/|I|) int_{-a}^{a} k(y,y) dy
  double width_term = 0.0;       // 2a |Lambda^{1/2}| / (pi |I|)
  double total() const { return reflection_term + core_term + width_term; }
};

DiagonalBound diagonal_average_bound(const SchrodingerSpectralModel& model, const Interval& I);

// Gram matrix [k(x_i, x_j)].
std::vector<std::vector<cplx>> kernel_gram(const KernelModel& model, const std::vector<double>& xs);

void write_kernel_pairs_csv(std::ostream& os, const KernelModel& model,
                            const std::vector<std::pair<double, double>>& pairs);
// Row header holds y values, first column holds x values; entries Re k.
void write_kernel_heatmap_csv(std::ostream& os, const KernelModel& model, const std::vector<double>& xs,
                              const std::vector<double>& ys);

}  // namespace varband
