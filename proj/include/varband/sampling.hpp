#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varband/kernel.hpp"
#include "varband/paleywiener.hpp"
#include "varband/sample_set.hpp"

namespace varband {

struct GapCondition {
  double delta = 0.0;
  double threshold = 0.0;  // pi / sqrt(Omega)
  double ratio = 0.0;      // delta sqrt(Omega) / pi
  bool pass = false;
};

// Max-gap test delta < pi / sqrt(Omega), delta as in max_gap_delta.
GapCondition gap_condition(const BandwidthProfile& profile, const SampleSet& X, double Omega);

struct SamplingBounds {
  double A = 0.0;
  double B = 0.0;
};

// ((1 - r)^2, (1 + r)^2) with r = delta sqrt(Omega) / pi.
SamplingBounds sampling_bounds(double delta, double Omega);

// Points through the origin (or the window centre when 0 lies outside) whose every gap
// satisfies gap / ess inf sqrt(p) <= ratio * pi / sqrt(Omega), within the window.
std::vector<double> adapted_lattice(const BandwidthProfile& profile, double ratio, double Omega, const Interval& window);

// Cells of the midpoint partition of X, the outer two clipped to the window:
// b_0 = window.a, b_i = (x_{i-1} + x_i) / 2, b_n = window.b.
std::vector<double> midpoint_partition(const SampleSet& X, const Interval& window);
// Window spanning X plus half the outer gaps.
Interval natural_window(const SampleSet& X);

// sum |v_i|^2 |cell_i| over the midpoint partition.
double weighted_sample_energy(const std::vector<double>& cells, const std::vector<cplx>& values);
// || f - sum f(x_i) chi_i || over the window.
double step_approximation_error(const VarBandFunction& f, const SampleSet& X, const Interval& window);

// Sampling-then-projection operator R h = P(sum h(x_i) chi_i) as a matrix on coefficients.
class StepOperator {
 public:
  StepOperator(ModelPtr model, const SampleSet& X, const Interval& window);
  const ModelPtr& model() const { return model_; }
  const std::vector<double>& cells() const { return cells_; }
  std::size_t samples() const { return points_.size(); }
  const std::vector<double>& points() const { return points_; }
  // Coefficients of P(sum v_i chi_i).
  std::vector<cplx> project(const std::vector<cplx>& values) const;
  // h(x_i) from coefficients.
  std::vector<cplx> sample(const std::vector<cplx>& F) const;
  std::vector<cplx> apply(const std::vector<cplx>& F) const { return project(sample(F)); }

 private:
  ModelPtr model_;
  std::vector<double> points_, cells_;
  std::vector<cplx> P_;  // dim x cells, column-major
  std::vector<cplx> S_;  // samples x dim, row-major
};

struct ReconstructOptions {
  int n_max = 60;
  double tol = 1e-10;
  std::optional<Interval> window;
  int divergence_run = 3;
};

struct ReconstructionReport {
  double delta = 0.0;
  double ratio = 0.0;
  bool certified = false;  // max-gap condition holds
  std::string warning;
  int iterations = 0;       // n of the returned f_n
  std::vector<double> residual;     // ||h_n||
  std::vector<double> certificate;  // r^{n+1}(pi + d sqrt W)/(pi - d sqrt W) * ||f||_est
  std::vector<double> error;        // ||f - f_n|| when the truth is known
  std::vector<double> certificate_true_norm;  // same bound with the true ||f||
  double f0_norm = 0.0;
  double norm_estimate = 0.0;  // ||f_0|| / (1 - r)
  double clipped_length = 0.0;  // length of the two boundary cells cut by the window
  bool converged = false;
  bool diverged = false;
  std::string diagnosis;
};

struct Reconstruction {
  VarBandFunction f;
  ReconstructionReport report;
};

// Iteration h_0 = R f, h_{n+1} = h_n - R h_n, f_n = h_0 + ... + h_n on the midpoint
// partition of X. Omega is the top of the model's spectral set.
Reconstruction reconstruct_iterative(ModelPtr model, const BandwidthProfile& profile, const SampleSet& X,
                                     const ReconstructOptions& opts = {}, const VarBandFunction* truth = nullptr);
// Same on a prebuilt operator; opts.window is ignored.
Reconstruction reconstruct_iterative(const StepOperator& R, const BandwidthProfile& profile,
                                     const std::vector<cplx>& values, const ReconstructOptions& opts = {},
                                     const VarBandFunction* truth = nullptr);

struct ShannonGrid {
  std::vector<int> index;
  std::vector<double> nodes;
  std::vector<double> weights;
};

// x_j = pi j sqrt(p(j)) / sqrt(Omega), w_j = sqrt(p-), sqrt(p+), (sqrt(p-) + sqrt(p+)) / 2.
ShannonGrid shannon_basis_toy(double p_minus, double p_plus, double Omega, int J);
// Gram matrix of sqrt(pi w_j / sqrt(Omega)) k(x_j, .).
std::vector<std::vector<double>> shannon_gram(double p_minus, double p_plus, double Omega, int J);
// (pi / sqrt(Omega)) sum w_j f(x_j) k(x_j, x).
cplx shannon_expansion(const ShannonGrid& grid, const std::vector<cplx>& samples, double p_minus, double p_plus,
                       double Omega, double x);

struct HalfLineValue {
  double value = 0.0;
  int terms = 0;
};

// sum_{j=1}^J (-1)^j f(pi j / sqrt(Omega)) sin(sqrt(Omega) x) 2 pi j / ((sqrt(Omega) x)^2 - (pi j)^2);
// the sample value at a node, 0 for x <= 0.
HalfLineValue halfline_expansion(double Omega, const std::vector<double>& samples, double x);

struct FrameEstimate {
  double A_est = 0.0;
  double B_est = 0.0;
  double riesz_lower = 0.0;  // smallest eigenvalue of M M*
  std::size_t samples = 0;
  std::size_t dimension = 0;
  double spacing = 0.0;
  std::string label = "discretized surrogate";
};

// Squared extreme singular values of f -> (f(x_i)) on the model rebuilt with a
// midpoint grid of spacing at least pi / L on Lambda^{1/2}, L the warped half-width of
// the window, so a critical lattice sees no more unknowns than samples.
FrameEstimate frame_bounds_estimate(const SpectralModel& model, const SampleSet& X, const Interval& window);

}  // namespace varband
