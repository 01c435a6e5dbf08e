#include "varband/sampling.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "varband/error.hpp"

namespace varband {

GapCondition gap_condition(const BandwidthProfile& profile, const SampleSet& X, double Omega) {
  if (X.size() < 2) throw InvalidArgument("gap_condition: need at least two points");
  if (!(Omega > 0.0)) throw InvalidArgument("gap_condition: Omega must be positive");
  GapCondition g;
  g.delta = max_gap_delta(profile, X);
  g.threshold = kPi / std::sqrt(Omega);
  g.ratio = g.delta / g.threshold;
  g.pass = g.delta < g.threshold;
  return g;
}

SamplingBounds sampling_bounds(double delta, double Omega) {
  if (!(delta >= 0.0) || !(Omega > 0.0)) throw InvalidArgument("sampling_bounds: need delta >= 0, Omega > 0");
  const double r = delta * std::sqrt(Omega) / kPi;
  return {r < 1.0 ? (1.0 - r) * (1.0 - r) : 0.0, (1.0 + r) * (1.0 + r)};
}

std::vector<double> adapted_lattice(const BandwidthProfile& profile, double ratio, double Omega, const Interval& window) {
  if (!(ratio > 0.0) || !(Omega > 0.0)) throw InvalidArgument("adapted_lattice: ratio and Omega must be positive");
  if (!(window.b > window.a)) throw InvalidArgument("adapted_lattice: empty window");
  const double c = ratio * kPi / std::sqrt(Omega);
  // Shrinking the gap can only raise the ess inf, so the iteration decreases monotonically.
  auto step = [&](double x, int dir) {
    double s = c * std::sqrt(profile.upper_bound());
    for (int it = 0; it < 100; ++it) {
      const double lo = dir > 0 ? x : x - s, hi = dir > 0 ? x + s : x;
      const double next = c * std::sqrt(gap_essinf_p(profile, lo, hi));
      if (next >= s * (1.0 - 1e-12)) break;
      s = next;
    }
    return s;
  };
  const double start = window.contains(0.0) ? 0.0 : 0.5 * (window.a + window.b);
  std::vector<double> left, xs;
  for (double x = start;;) {
    x -= step(x, -1);
    if (x < window.a) break;
    left.push_back(x);
  }
  xs.assign(left.rbegin(), left.rend());
  for (double x = start; x <= window.b; x += step(x, 1)) xs.push_back(x);
  return xs;
}

std::vector<double> midpoint_partition(const SampleSet& X, const Interval& window) {
  if (X.empty()) throw InvalidArgument("midpoint_partition: empty sample set");
  if (X[0] < window.a || X[X.size() - 1] > window.b)
    throw InvalidArgument("midpoint_partition: samples outside the window");
  std::vector<double> b(X.size() + 1);
  b.front() = window.a;
  b.back() = window.b;
  for (std::size_t i = 1; i < X.size(); ++i) b[i] = 0.5 * (X[i - 1] + X[i]);
  return b;
}

Interval natural_window(const SampleSet& X) {
  if (X.size() < 2) throw InvalidArgument("natural_window: need at least two points");
  const std::size_t n = X.size();
  return {X[0] - 0.5 * (X[1] - X[0]), X[n - 1] + 0.5 * (X[n - 1] - X[n - 2])};
}

double weighted_sample_energy(const std::vector<double>& cells, const std::vector<cplx>& values) {
  if (cells.size() != values.size() + 1) throw InvalidArgument("weighted_sample_energy: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += std::norm(values[i]) * (cells[i + 1] - cells[i]);
  return s;
}

double step_approximation_error(const VarBandFunction& f, const SampleSet& X, const Interval& window) {
  const auto cells = midpoint_partition(X, window);
  const auto fx = f.values(X.points());
  double s = 0.0;
  for (std::size_t i = 0; i < fx.size(); ++i) {
    const auto rule = spatial_rule(f.model(), {cells[i], cells[i + 1]});
    const auto v = f.values(rule.nodes);
    for (std::size_t n = 0; n < v.size(); ++n) s += rule.weights[n] * std::norm(v[n] - fx[i]);
  }
  return std::sqrt(s);
}

StepOperator::StepOperator(ModelPtr model, const SampleSet& X, const Interval& window)
    : model_(std::move(model)), points_(X.points()), cells_(midpoint_partition(X, window)) {
  P_ = step_projection_matrix(*model_, cells_);
  const std::size_t dim = model_->dim(), n = points_.size();
  S_.resize(n * dim);
  const double sigma = model_->sigma();
  parallel_for(n, [&](std::size_t i) {
    cplx* row = S_.data() + i * dim;
    model_->basis(points_[i], row);
    for (std::size_t k = 0; k < dim; ++k) row[k] *= sigma * model_->weights()[k];
  });
}

std::vector<cplx> StepOperator::project(const std::vector<cplx>& values) const {
  const auto dim = static_cast<Eigen::Index>(model_->dim());
  const auto n = static_cast<Eigen::Index>(points_.size());
  if (values.size() != points_.size()) throw InvalidArgument("StepOperator: one value per sample expected");
  Eigen::Map<const Eigen::MatrixXcd> P(P_.data(), dim, n);
  Eigen::Map<const Eigen::VectorXcd> v(values.data(), n);
  std::vector<cplx> out(model_->dim());
  Eigen::Map<Eigen::VectorXcd>(out.data(), dim) = P * v;
  return out;
}

std::vector<cplx> StepOperator::sample(const std::vector<cplx>& F) const {
  const auto dim = static_cast<Eigen::Index>(model_->dim());
  const auto n = static_cast<Eigen::Index>(points_.size());
  if (F.size() != model_->dim()) throw InvalidArgument("StepOperator: coefficient size mismatch");
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> S(S_.data(), n, dim);
  Eigen::Map<const Eigen::VectorXcd> f(F.data(), dim);
  std::vector<cplx> out(points_.size());
  Eigen::Map<Eigen::VectorXcd>(out.data(), n) = S * f;
  return out;
}

namespace {

double weighted_norm(const SpectralModel& model, const std::vector<cplx>& F) {
  double s = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) s += model.weights()[i] * std::norm(F[i]);
  return std::sqrt(s);
}

}  // namespace

Reconstruction reconstruct_iterative(ModelPtr model, const BandwidthProfile& profile, const SampleSet& X,
                                     const ReconstructOptions& opts, const VarBandFunction* truth) {
  if (!X.has_values()) throw InvalidArgument("reconstruct_iterative: sample set carries no values");
  const StepOperator R(std::move(model), X, opts.window ? *opts.window : natural_window(X));
  return reconstruct_iterative(R, profile, X.values(), opts, truth);
}

Reconstruction reconstruct_iterative(const StepOperator& R, const BandwidthProfile& profile,
                                     const std::vector<cplx>& values, const ReconstructOptions& opts,
                                     const VarBandFunction* truth) {
  if (values.size() != R.samples()) throw InvalidArgument("reconstruct_iterative: one value per sample expected");
  if (opts.n_max < 0) throw InvalidArgument("reconstruct_iterative: n_max must be nonnegative");
  const ModelPtr& model = R.model();
  if (truth && truth->model_ptr() != model) throw InvalidArgument("reconstruct_iterative: truth on another model");
  ReconstructionReport rep;
  const double Omega = model->spectral_set().bandwidth();
  const auto gap = gap_condition(profile, SampleSet(R.points()), Omega);
  rep.delta = gap.delta;
  rep.ratio = gap.ratio;
  rep.certified = gap.pass;
  if (!gap.pass) rep.warning = "max-gap condition fails (delta sqrt(Omega)/pi >= 1): convergence not certified";

  const auto& cells = R.cells();
  rep.clipped_length = (cells[1] - cells[0]) + (cells[cells.size() - 1] - cells[cells.size() - 2]);

  std::vector<cplx> h = R.project(values);
  std::vector<cplx> f = h;
  rep.f0_norm = weighted_norm(*model, h);
  const double r = gap.ratio;
  rep.norm_estimate = r < 1.0 ? rep.f0_norm / (1.0 - r) : std::numeric_limits<double>::infinity();
  const double amp = r < 1.0 ? (1.0 + r) / (1.0 - r) : std::numeric_limits<double>::infinity();
  const double true_norm = truth ? truth->norm() : 0.0;

  int growth = 0;
  for (int n = 0;; ++n) {
    rep.iterations = n;
    rep.residual.push_back(weighted_norm(*model, h));
    const double rn = std::pow(r, n + 1);
    rep.certificate.push_back(rn * amp * rep.norm_estimate);
    if (truth) {
      std::vector<cplx> d(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) d[i] = truth->coefficients()[i] - f[i];
      rep.error.push_back(weighted_norm(*model, d));
      rep.certificate_true_norm.push_back(rn * amp * true_norm);
    }
    if (n > 0 && rep.residual[n] > rep.residual[n - 1]) {
      if (++growth >= opts.divergence_run) {
        rep.diverged = true;
        rep.diagnosis = "residual grew for " + std::to_string(growth) + " consecutive iterations";
        if (!gap.pass) rep.diagnosis += "; the max-gap condition fails for this sample set";
        break;
      }
    } else {
      growth = 0;
    }
    if (gap.pass && rep.certificate.back() < opts.tol) {
      rep.converged = true;
      break;
    }
    if (rep.residual.back() == 0.0) {
      rep.converged = true;
      break;
    }
    if (n >= opts.n_max) break;
    const auto Rh = R.apply(h);
    for (std::size_t i = 0; i < h.size(); ++i) {
      h[i] -= Rh[i];
      f[i] += h[i];
    }
  }
  if (!rep.converged && !rep.diverged) rep.diagnosis = "stopped at n_max";
  return {VarBandFunction(model, std::move(f)), rep};
}

ShannonGrid shannon_basis_toy(double p_minus, double p_plus, double Omega, int J) {
  if (!(Omega > 0.0)) throw InvalidArgument("shannon_basis_toy: Omega must be positive");
  if (!(p_minus > 0.0 && p_plus > 0.0)) throw InvalidArgument("shannon_basis_toy: p values must be positive");
  if (J < 0) throw InvalidArgument("shannon_basis_toy: J must be nonnegative");
  const double sm = std::sqrt(p_minus), sp = std::sqrt(p_plus), so = std::sqrt(Omega);
  ShannonGrid g;
  for (int j = -J; j <= J; ++j) {
    g.index.push_back(j);
    g.nodes.push_back(j < 0 ? kPi * j * sm / so : kPi * j * sp / so);
    g.weights.push_back(j < 0 ? sm : j > 0 ? sp : 0.5 * (sm + sp));
  }
  return g;
}

std::vector<std::vector<double>> shannon_gram(double p_minus, double p_plus, double Omega, int J) {
  const auto g = shannon_basis_toy(p_minus, p_plus, Omega, J);
  const std::size_t n = g.nodes.size();
  std::vector<double> scale(n);
  for (std::size_t i = 0; i < n; ++i) scale[i] = std::sqrt(kPi * g.weights[i] / std::sqrt(Omega));
  std::vector<std::vector<double>> G(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      G[i][k] = scale[i] * scale[k] * toy_kernel(p_minus, p_plus, Omega, g.nodes[i], g.nodes[k]);
  return G;
}

cplx shannon_expansion(const ShannonGrid& grid, const std::vector<cplx>& samples, double p_minus, double p_plus,
                       double Omega, double x) {
  if (samples.size() != grid.nodes.size()) throw InvalidArgument("shannon_expansion: one sample per node expected");
  cplx s = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j)
    s += grid.weights[j] * samples[j] * toy_kernel(p_minus, p_plus, Omega, grid.nodes[j], x);
  return kPi / std::sqrt(Omega) * s;
}

HalfLineValue halfline_expansion(double Omega, const std::vector<double>& samples, double x) {
  if (!(Omega > 0.0)) throw InvalidArgument("halfline_expansion: Omega must be positive");
  HalfLineValue out;
  out.terms = static_cast<int>(samples.size());
  if (x <= 0.0) return out;
  const double s = std::sqrt(Omega) * x;
  const double j_near = std::round(s / kPi);
  if (j_near >= 1.0 && j_near <= samples.size() && std::abs(s - kPi * j_near) <= 1e-12 * std::max(1.0, s)) {
    out.value = samples[static_cast<std::size_t>(j_near) - 1];
    return out;
  }
  const double sn = std::sin(s);
  double acc = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double pj = kPi * static_cast<double>(k + 1);
    const double sign = (k % 2 == 0) ? -1.0 : 1.0;
    acc += sign * samples[k] * 2.0 * pj / ((s - pj) * (s + pj));
  }
  out.value = sn * acc;
  return out;
}

FrameEstimate frame_bounds_estimate(const SpectralModel& model, const SampleSet& X, const Interval& window) {
  if (X.empty()) throw InvalidArgument("frame_bounds_estimate: empty sample set");
  if (X[0] < window.a || X[X.size() - 1] > window.b)
    throw InvalidArgument("frame_bounds_estimate: samples outside the window");
  const double half = 0.5 * (model.warp(window.b) - model.warp(window.a));
  if (!(half > 0.0)) throw InvalidArgument("frame_bounds_estimate: empty window");
  FrameEstimate est;
  const auto grid = model.with_quadrature(SpectralQuadrature::midpoint(model.spectral_set(), kPi / half, true));
  est.spacing = grid->quadrature().spacing();
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < grid->dim(); ++k)
    if (grid->weights()[k] > 0.0) active.push_back(k);
  const auto n = static_cast<Eigen::Index>(X.size()), d = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXcd M(n, d);
  parallel_for(X.size(), [&](std::size_t i) {
    const auto phi = grid->basis(X[i]);
    for (Eigen::Index c = 0; c < d; ++c) {
      const std::size_t k = active[c];
      M(static_cast<Eigen::Index>(i), c) = grid->sigma() * std::sqrt(grid->weights()[k]) * phi[k];
    }
  });
  const Eigen::VectorXd s = Eigen::BDCSVD<Eigen::MatrixXcd>(M).singularValues();
  const double smax = s.size() ? s(0) : 0.0, smin = s.size() ? s(s.size() - 1) : 0.0;
  est.samples = X.size();
  est.dimension = active.size();
  est.B_est = smax * smax;
  est.A_est = n >= d ? smin * smin : 0.0;
  est.riesz_lower = n <= d ? smin * smin : 0.0;
  return est;
}

}  // namespace varband
