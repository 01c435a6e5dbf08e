#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "varband/spectral.hpp"

namespace varband {

// f in PW_Lambda held by its spectral coefficients; f(x) = sigma * sum m F Phi(x).
class VarBandFunction {
 public:
  VarBandFunction(ModelPtr model, std::vector<cplx> F);

  const SpectralModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  const std::vector<cplx>& coefficients() const { return F_; }

  cplx operator()(double x) const;
  std::vector<cplx> values(const std::vector<double>& xs) const;
  // sum m |F|^2, the L2 norm by Parseval.
  double norm() const;

  VarBandFunction& operator+=(const VarBandFunction& g);
  VarBandFunction& operator-=(const VarBandFunction& g);
  VarBandFunction& operator*=(cplx c);

 private:
  ModelPtr model_;
  std::vector<cplx> F_;
};

VarBandFunction operator+(VarBandFunction f, const VarBandFunction& g);
VarBandFunction operator-(VarBandFunction f, const VarBandFunction& g);
VarBandFunction operator*(cplx c, VarBandFunction f);

VarBandFunction synthesize(ModelPtr model, std::vector<cplx> F);
cplx evaluate(const VarBandFunction& f, double x);
// sigma * ||F|| * ||Phi(., x)|| in the weighted norm; dominates |f(x)|.
double evaluation_bound(const VarBandFunction& f, double x);
// k(., x0) as an element of the space: F = sigma * conj Phi(x0).
VarBandFunction reproducing_element(ModelPtr model, double x0);
VarBandFunction random_function(ModelPtr model, std::mt19937_64& rng, int taper = 2);

// L2 norm over the window by composite Gauss-Legendre.
double spatial_norm(const VarBandFunction& f, const Interval& window, int order = 12);
// L2 distance of two functions over the window.
double spatial_distance(const std::function<cplx(double)>& f, const std::function<cplx(double)>& g,
                        const SpectralModel& model, const Interval& window, int order = 12);

// P_Lambda of sum c_i 1_{[b_i, b_{i+1}]}; breakpoints has one more entry than values.
VarBandFunction project_step(ModelPtr model, const std::vector<double>& breakpoints, const std::vector<cplx>& values,
                             const Interval& window);
// Columns of the map c -> coefficients of project_step, cell by cell (dim x cells, column-major).
std::vector<cplx> step_projection_matrix(const SpectralModel& model, const std::vector<double>& breakpoints);

// ||A^k f|| / (Omega^k ||f||) with A acting as lambda = w^2 on the spectral side.
double bernstein_ratio(const VarBandFunction& f, int k, double Omega);

// Classical band-limited function (2 pi)^{-1/2} int_L F(l) e^{i l t} dl over
// the real intervals L, by composite Gauss-Legendre.
struct WarpedOptions {
  double max_panel = 0.05;
  int order = 16;
};
cplx classical_bandlimited_eval(const std::function<cplx(double)>& F, const std::vector<Interval>& lambda_set, double t,
                                const WarpedOptions& opts = {});
// Paley-Wiener function of the first-order operator with coefficient p:
// the classical function above evaluated at eta(x).
cplx warped_bandlimited_eval(const BandwidthProfile& profile, const std::function<cplx(double)>& F,
                             const std::vector<Interval>& lambda_set, double x, const WarpedOptions& opts = {});

void write_function_csv(std::ostream& os, const VarBandFunction& f, const std::vector<double>& xs);
void write_coefficients_csv(std::ostream& os, const VarBandFunction& f);

}  // namespace varband
