#include "varband/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "varband/error.hpp"

namespace varband {

double toy_kernel(double p_minus, double p_plus, double Omega, double x, double y) {
  if (!(Omega > 0.0)) throw InvalidArgument("toy_kernel: Omega must be positive");
  const double sm = std::sqrt(p_minus), sp = std::sqrt(p_plus), so = std::sqrt(Omega);
  const double refl = (sp - sm) / (sp + sm);
  if (x <= 0.0 && y <= 0.0)
    return so / (kPi * sm) * (sinc(so * (x - y) / sm) - refl * sinc(so * (x + y) / sm));
  if (x > 0.0 && y > 0.0)
    return so / (kPi * sp) * (sinc(so * (x - y) / sp) + refl * sinc(so * (x + y) / sp));
  const double c = 2.0 * so / (kPi * (sp + sm));
  if (x <= 0.0) return c * sinc(so * (x / sm - y / sp));
  return c * sinc(so * (y / sm - x / sp));
}

double halfline_kernel(double Omega, double x, double y) {
  if (!(Omega > 0.0)) throw InvalidArgument("halfline_kernel: Omega must be positive");
  if (x < 0.0 || y < 0.0) return 0.0;
  const double so = std::sqrt(Omega);
  return so / kPi * (sinc(so * (x - y)) - sinc(so * (x + y)));
}

namespace {

void check_resolution(const SpectralQuadrature& quad, double X) {
  if (quad.spacing() > kPi / (4.0 * X)) {
    std::ostringstream os;
    os << "spectral grid spacing " << quad.spacing() << " does not resolve |x| up to " << X
       << "; rebuild the quadrature with x_max >= " << X;
    throw UnderResolved(os.str(), X);
  }
}

}  // namespace

double schrodinger_kernel_asymptotic(const SchrodingerSpectralModel& model, double x, double y) {
  const double a = model.core_radius();
  if (std::abs(x) < a || std::abs(y) < a) throw InvalidArgument("asymptotic kernel needs |x|, |y| >= a");
  const auto& w = model.quadrature().weights();
  double s = 0.0;
  for (std::size_t l = 0; l < model.nodes(); ++l) {
    const double om = model.omega(l);
    const auto& d = model.data(l);
    double term;
    if (x >= a && y >= a) {
      term = std::cos(om * (x - y)) + std::real(d.R2 * std::exp(kI * (om * (x + y))));
    } else if (x <= -a && y <= -a) {
      term = std::cos(om * (x - y)) + std::real(d.R1 * std::exp(-kI * (om * (x + y))));
    } else if (x <= -a) {
      term = std::real(d.T * std::exp(-kI * (om * (x - y))));
    } else {
      term = std::real(d.T * std::exp(kI * (om * (x - y))));
    }
    s += w[l] * term;
  }
  return s / kPi;
}

cplx spectral_sum_kernel(const SpectralModel& model, double x, double y) {
  const auto px = model.basis(x);
  const auto py = model.basis(y);
  const auto& m = model.weights();
  cplx s = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i) s += m[i] * px[i] * std::conj(py[i]);
  return model.sigma() * model.sigma() * s;
}

KernelValue schrodinger_kernel_eval(const SchrodingerSpectralModel& model, double x, double y,
                                    const KernelOptions& opts) {
  const double a = model.core_radius();
  if (opts.check_resolution) check_resolution(model.quadrature(), std::max({std::abs(x), std::abs(y), a}));
  KernelValue out;
  if (opts.fast_path && std::abs(x) >= a && std::abs(y) >= a && a > 0.0) {
    out.value = schrodinger_kernel_asymptotic(model, x, y);
    out.fast_path = true;
    return out;
  }
  out.value = spectral_sum_kernel(model, x, y);
  if (std::abs(out.value.imag()) <= opts.imag_tolerance) {
    out.value = out.value.real();
  } else {
    out.imaginary_flag = true;
  }
  return out;
}

cplx schrodinger_kernel(const SchrodingerSpectralModel& model, double x, double y, const KernelOptions& opts) {
  return schrodinger_kernel_eval(model, x, y, opts).value;
}

cplx sl_kernel(const LiouvilleSpectralModel& model, double x, double y, const KernelOptions& opts) {
  const auto& p = model.profile();
  const cplx h = schrodinger_kernel(model.inner(), p.zeta(x), p.zeta(y), opts);
  return std::pow(p.value(x) * p.value(y), -0.25) * h;
}

cplx kernel(const KernelModel& model, double x, double y) {
  return std::visit(
      [&](const auto& m) -> cplx {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ToyClosedForm>) {
          return toy_kernel(m.p_minus, m.p_plus, m.Omega, x, y);
        } else if constexpr (std::is_same_v<M, HalfLineLimit>) {
          return halfline_kernel(m.Omega, x, y);
        } else if constexpr (std::is_same_v<M, SchrodingerQuadrature>) {
          return schrodinger_kernel(*m.model, x, y);
        } else if constexpr (std::is_same_v<M, LiouvillePullback>) {
          return sl_kernel(*m.model, x, y);
        } else {
          return spectral_sum_kernel(*m.model, x, y);
        }
      },
      model);
}

double kernel_diagonal(const KernelModel& model, double y) { return kernel(model, y, y).real(); }

namespace {

const SpectralModel* spectral_of(const KernelModel& model) {
  if (const auto* s = std::get_if<SchrodingerQuadrature>(&model)) return s->model.get();
  if (const auto* l = std::get_if<LiouvillePullback>(&model)) return l->model.get();
  if (const auto* g = std::get_if<SpectralSum>(&model)) return g->model.get();
  return nullptr;
}

// Highest spatial frequency of y -> k(x, y).
double kernel_frequency(const KernelModel& model) {
  if (const auto* t = std::get_if<ToyClosedForm>(&model))
    return std::sqrt(t->Omega / std::min(t->p_minus, t->p_plus));
  if (const auto* h = std::get_if<HalfLineLimit>(&model)) return std::sqrt(h->Omega);
  const SpectralModel* s = spectral_of(model);
  double wmax = 0.0;
  for (double w : s->quadrature().nodes()) wmax = std::max(wmax, w);
  return wmax / std::sqrt(s->p_min());
}

QuadRule row_rule(const KernelModel& model, double lo, double hi) {
  const double kappa = 2.0 * kernel_frequency(model);
  return composite_gauss_legendre(lo, hi, std::min(0.5, 5.0 / std::max(kappa, 1e-12)), 12);
}

}  // namespace

KernelRow::KernelRow(const KernelModel& model, double x) : model_(&model), x_(x), spectral_(spectral_of(model)) {
  if (!spectral_) return;
  coeff_ = spectral_->basis(x);
  const double s2 = spectral_->sigma() * spectral_->sigma();
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] *= s2 * spectral_->weights()[i];
  scratch_.resize(coeff_.size());
}

cplx KernelRow::operator()(double y) const {
  if (!spectral_) return kernel(*model_, x_, y);
  spectral_->basis(y, scratch_.data());
  cplx s = 0.0;
  for (std::size_t i = 0; i < coeff_.size(); ++i) s += coeff_[i] * std::conj(scratch_[i]);
  return s;
}

double kernel_tail_mass(const KernelModel& model, double x, double b, const Interval& window) {
  if (!(b > 0.0)) throw InvalidArgument("kernel_tail_mass: b must be positive");
  const KernelRow row(model, x);
  double s = 0.0;
  auto piece = [&](double lo, double hi) {
    if (!(lo < hi)) return;
    const auto rule = row_rule(model, lo, hi);
    for (std::size_t n = 0; n < rule.size(); ++n) s += rule.weights[n] * std::norm(row(rule.nodes[n]));
  };
  piece(window.a, std::min(window.b, x - b));
  piece(std::max(window.a, x + b), window.b);
  return s;
}

LocalizationScan localization_radius(const KernelModel& model, double x, const Interval& window,
                                     const std::vector<double>& radii, double rel_tol) {
  LocalizationScan scan;
  scan.radii = radii;
  scan.diagonal = kernel_diagonal(model, x);
  for (double b : radii) {
    scan.tail.push_back(kernel_tail_mass(model, x, b, window));
    if (scan.radius < 0.0 && scan.tail.back() < rel_tol * scan.diagonal) scan.radius = b;
  }
  return scan;
}

double diagonal_average(const KernelModel& model, const Interval& I) {
  if (!(I.length() > 0.0)) throw InvalidArgument("diagonal_average: interval must have positive length");
  const auto rule = row_rule(model, I.a, I.b);
  std::vector<double> vals(rule.size());
  parallel_for(rule.size(), [&](std::size_t n) { vals[n] = kernel_diagonal(model, rule.nodes[n]); });
  double s = 0.0;
  for (std::size_t n = 0; n < rule.size(); ++n) s += rule.weights[n] * vals[n];
  return s / I.length();
}

double diagonal_sup(const KernelModel& model, const Interval& I, std::size_t points) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points; ++i) {
    const double y = I.a + I.length() * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(points - 1, 1));
    m = std::max(m, kernel_diagonal(model, y));
  }
  return m;
}

DiagonalBound diagonal_average_bound(const SchrodingerSpectralModel& model, const Interval& I) {
  DiagonalBound b;
  const double a = model.core_radius();
  const auto& w = model.quadrature().weights();
  double r2 = 0.0;
  for (std::size_t l = 0; l < model.nodes(); ++l) r2 += w[l] * std::norm(model.data(l).R1);
  b.reflection_norm = std::sqrt(r2);
  b.reflection_term = 2.0 / std::sqrt(kPi) * b.reflection_norm / std::sqrt(I.length());
  if (a > 0.0) {
    const auto rule = composite_gauss_legendre(-a, a, 0.05, 12);
    double s = 0.0;
    for (std::size_t n = 0; n < rule.size(); ++n)
      s += rule.weights[n] * std::abs(schrodinger_kernel(model, rule.nodes[n], rule.nodes[n]));
    b.core_term = s / I.length();
  }
  b.width_term = 2.0 * a * model.spectral_set().sqrt_measure() / (kPi * I.length());
  return b;
}

std::vector<std::vector<cplx>> kernel_gram(const KernelModel& model, const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  std::vector<std::vector<cplx>> G(n, std::vector<cplx>(n));
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) G[i][j] = kernel(model, xs[i], xs[j]);
  });
  return G;
}

void write_kernel_pairs_csv(std::ostream& os, const KernelModel& model,
                            const std::vector<std::pair<double, double>>& pairs) {
  os << "x,y,re_k,im_k\n";
  char buf[128];
  for (const auto& [x, y] : pairs) {
    const cplx k = kernel(model, x, y);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", x, y, k.real(), k.imag());
    os << buf;
  }
}

void write_kernel_heatmap_csv(std::ostream& os, const KernelModel& model, const std::vector<double>& xs,
                              const std::vector<double>& ys) {
  char buf[64];
  os << "x\\y";
  for (double y : ys) {
    std::snprintf(buf, sizeof buf, ",%.17g", y);
    os << buf;
  }
  os << '\n';
  for (double x : xs) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
    for (double y : ys) {
      std::snprintf(buf, sizeof buf, ",%.17g", kernel(model, x, y).real());
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace varband
