#include "varband/paleywiener.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "varband/error.hpp"

namespace varband {

VarBandFunction::VarBandFunction(ModelPtr model, std::vector<cplx> F) : model_(std::move(model)), F_(std::move(F)) {
  if (!model_) throw InvalidArgument("VarBandFunction: null model");
  if (F_.size() != model_->dim())
    throw InvalidArgument("VarBandFunction: expected " + std::to_string(model_->dim()) + " coefficients, got " +
                          std::to_string(F_.size()));
}

cplx VarBandFunction::operator()(double x) const {
  std::vector<cplx> phi(model_->dim());
  model_->basis(x, phi.data());
  const auto& m = model_->weights();
  cplx s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) s += m[i] * F_[i] * phi[i];
  return model_->sigma() * s;
}

std::vector<cplx> VarBandFunction::values(const std::vector<double>& xs) const {
  std::vector<cplx> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { out[i] = (*this)(xs[i]); });
  return out;
}

double VarBandFunction::norm() const {
  const auto& m = model_->weights();
  double s = 0.0;
  for (std::size_t i = 0; i < F_.size(); ++i) s += m[i] * std::norm(F_[i]);
  return std::sqrt(s);
}

namespace {
void require_same_model(const VarBandFunction& f, const VarBandFunction& g) {
  if (f.model_ptr() != g.model_ptr()) throw InvalidArgument("VarBandFunction: functions live on different models");
}
}  // namespace

VarBandFunction& VarBandFunction::operator+=(const VarBandFunction& g) {
  require_same_model(*this, g);
  for (std::size_t i = 0; i < F_.size(); ++i) F_[i] += g.F_[i];
  return *this;
}

VarBandFunction& VarBandFunction::operator-=(const VarBandFunction& g) {
  require_same_model(*this, g);
  for (std::size_t i = 0; i < F_.size(); ++i) F_[i] -= g.F_[i];
  return *this;
}

VarBandFunction& VarBandFunction::operator*=(cplx c) {
  for (auto& v : F_) v *= c;
  return *this;
}

VarBandFunction operator+(VarBandFunction f, const VarBandFunction& g) { return f += g; }
VarBandFunction operator-(VarBandFunction f, const VarBandFunction& g) { return f -= g; }
VarBandFunction operator*(cplx c, VarBandFunction f) { return f *= c; }

VarBandFunction synthesize(ModelPtr model, std::vector<cplx> F) { return VarBandFunction(std::move(model), std::move(F)); }

cplx evaluate(const VarBandFunction& f, double x) { return f(x); }

double evaluation_bound(const VarBandFunction& f, double x) {
  const auto& model = f.model();
  const auto phi = model.basis(x);
  double s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) s += model.weights()[i] * std::norm(phi[i]);
  return model.sigma() * f.norm() * std::sqrt(s);
}

VarBandFunction reproducing_element(ModelPtr model, double x0) {
  auto F = model->basis(x0);
  for (auto& v : F) v = model->sigma() * std::conj(v);
  return VarBandFunction(std::move(model), std::move(F));
}

VarBandFunction random_function(ModelPtr model, std::mt19937_64& rng, int taper) {
  auto F = random_coefficients(*model, rng, 6, taper);
  return VarBandFunction(std::move(model), std::move(F));
}

double spatial_norm(const VarBandFunction& f, const Interval& window, int order) {
  const auto rule = spatial_rule(f.model(), window, order);
  const auto v = f.values(rule.nodes);
  double s = 0.0;
  for (std::size_t n = 0; n < v.size(); ++n) s += rule.weights[n] * std::norm(v[n]);
  return std::sqrt(s);
}

double spatial_distance(const std::function<cplx(double)>& f, const std::function<cplx(double)>& g,
                        const SpectralModel& model, const Interval& window, int order) {
  const auto rule = spatial_rule(model, window, order);
  std::vector<double> e(rule.size());
  parallel_for(rule.size(), [&](std::size_t n) { e[n] = rule.weights[n] * std::norm(f(rule.nodes[n]) - g(rule.nodes[n])); });
  double s = 0.0;
  for (double v : e) s += v;
  return std::sqrt(s);
}

std::vector<cplx> step_projection_matrix(const SpectralModel& model, const std::vector<double>& breakpoints) {
  if (breakpoints.size() < 2) throw InvalidArgument("step projection: need at least one cell");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1])) throw InvalidArgument("step projection: breakpoints must increase");
  const std::size_t cells = breakpoints.size() - 1, dim = model.dim();
  std::vector<cplx> P(dim * cells);
  parallel_for(cells, [&](std::size_t c) {
    cplx* col = P.data() + c * dim;
    model.basis_integral(breakpoints[c], breakpoints[c + 1], col);
    for (std::size_t i = 0; i < dim; ++i) col[i] = model.sigma() * std::conj(col[i]);
  });
  return P;
}

VarBandFunction project_step(ModelPtr model, const std::vector<double>& breakpoints, const std::vector<cplx>& values,
                             const Interval& window) {
  if (breakpoints.size() != values.size() + 1)
    throw InvalidArgument("project_step: need one more breakpoint than values");
  if (values.empty()) return VarBandFunction(model, std::vector<cplx>(model->dim(), 0.0));
  if (breakpoints.front() < window.a || breakpoints.back() > window.b)
    throw InvalidArgument("project_step: step support escapes the window");
  const auto P = step_projection_matrix(*model, breakpoints);
  const std::size_t dim = model->dim();
  std::vector<cplx> F(dim, 0.0);
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (values[c] == 0.0) continue;
    const cplx* col = P.data() + c * dim;
    for (std::size_t i = 0; i < dim; ++i) F[i] += values[c] * col[i];
  }
  return VarBandFunction(std::move(model), std::move(F));
}

double bernstein_ratio(const VarBandFunction& f, int k, double Omega) {
  if (k < 0) throw InvalidArgument("bernstein_ratio: k must be nonnegative");
  if (!(Omega > 0.0)) throw InvalidArgument("bernstein_ratio: Omega must be positive");
  const auto& model = f.model();
  const auto& F = f.coefficients();
  double num = 0.0, den = 0.0;
  for (std::size_t l = 0; l < model.nodes(); ++l) {
    const double r = std::pow(model.lambda(l) / Omega, 2 * k);
    for (std::size_t j = 0; j < 2; ++j) {
      const double e = model.weights()[2 * l + j] * std::norm(F[2 * l + j]);
      num += r * e;
      den += e;
    }
  }
  if (den == 0.0) throw InvalidArgument("bernstein_ratio: zero function");
  return std::sqrt(num / den);
}

cplx classical_bandlimited_eval(const std::function<cplx(double)>& F, const std::vector<Interval>& lambda_set, double t,
                                const WarpedOptions& opts) {
  // Panels resolve both F and the oscillation e^{i l t}.
  const double panel = std::min(opts.max_panel, 1.0 / std::max(std::abs(t), 1e-300));
  cplx s = 0.0;
  for (const auto& I : lambda_set) {
    if (!(I.length() > 0.0)) continue;
    const auto rule = composite_gauss_legendre(I.a, I.b, panel, opts.order);
    for (std::size_t n = 0; n < rule.size(); ++n)
      s += rule.weights[n] * F(rule.nodes[n]) * std::exp(kI * (rule.nodes[n] * t));
  }
  return s / std::sqrt(2.0 * kPi);
}

cplx warped_bandlimited_eval(const BandwidthProfile& profile, const std::function<cplx(double)>& F,
                             const std::vector<Interval>& lambda_set, double x, const WarpedOptions& opts) {
  return classical_bandlimited_eval(F, lambda_set, profile.eta(x), opts);
}

void write_function_csv(std::ostream& os, const VarBandFunction& f, const std::vector<double>& xs) {
  const auto v = f.values(xs);
  os << "x,re_f,im_f\n";
  char buf[128];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", xs[i], v[i].real(), v[i].imag());
    os << buf;
  }
}

void write_coefficients_csv(std::ostream& os, const VarBandFunction& f) {
  const auto& F = f.coefficients();
  os << "omega,re_F1,im_F1,re_F2,im_F2\n";
  char buf[192];
  for (std::size_t l = 0; l < f.model().nodes(); ++l) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", f.model().omega(l), F[2 * l].real(),
                  F[2 * l].imag(), F[2 * l + 1].real(), F[2 * l + 1].imag());
    os << buf;
  }
}

}  // namespace varband
