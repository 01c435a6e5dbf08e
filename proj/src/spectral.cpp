#include "varband/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "varband/error.hpp"
#include "varband/sturm.hpp"

namespace varband {

namespace {

// Integral of e^{ikx} over [lo, hi], stable for small k (hi - lo).
cplx wave_integral(double k, double lo, double hi) {
  const double len = hi - lo;
  return std::exp(kI * (k * 0.5 * (lo + hi))) * (len * sinc(0.5 * k * len));
}
}  // namespace

SpectralSet::SpectralSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  if (intervals_.empty()) throw InvalidArgument("SpectralSet: at least one interval is required");
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& I = intervals_[i];
    if (!(I.a >= 0.0) || !std::isfinite(I.b)) throw InvalidArgument("SpectralSet: intervals must lie in [0, inf)");
    if (!(I.b > I.a)) throw InvalidArgument("SpectralSet: intervals must have positive length");
    if (i > 0 && !(I.a > intervals_[i - 1].b))
      throw InvalidArgument("SpectralSet: intervals must be sorted and disjoint");
  }
}

SpectralSet SpectralSet::band(double omega_top) { return SpectralSet({{0.0, omega_top}}); }

std::vector<Interval> SpectralSet::sqrt_intervals() const {
  std::vector<Interval> out;
  for (const auto& I : intervals_) out.emplace_back(std::sqrt(I.a), std::sqrt(I.b));
  return out;
}

double SpectralSet::sqrt_measure() const {
  double s = 0.0;
  for (const auto& I : sqrt_intervals()) s += I.length();
  return s;
}

double SpectralSet::shortest_sqrt_component() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& I : sqrt_intervals()) m = std::min(m, I.length());
  return m;
}

bool SpectralSet::contains(double lambda) const {
  for (const auto& I : intervals_)
    if (I.contains(lambda)) return true;
  return false;
}

SpectralQuadrature SpectralQuadrature::gauss(const SpectralSet& set, double x_max, int order) {
  if (!(x_max > 0.0)) throw InvalidArgument("SpectralQuadrature: x_max must be positive");
  SpectralQuadrature q;
  q.order_ = order;
  q.components_ = set.sqrt_intervals();
  const double panel = kPi / (8.0 * x_max);
  for (std::size_t c = 0; c < q.components_.size(); ++c) {
    const auto& I = q.components_[c];
    const auto rule = composite_gauss_legendre(I.a, I.b, panel, order);
    const double np = std::max(1.0, std::ceil(I.length() / panel - 1e-12));
    q.spacing_ = std::max(q.spacing_, I.length() / np);
    q.nodes_.insert(q.nodes_.end(), rule.nodes.begin(), rule.nodes.end());
    q.weights_.insert(q.weights_.end(), rule.weights.begin(), rule.weights.end());
    q.component_.insert(q.component_.end(), rule.size(), c);
  }
  return q;
}

SpectralQuadrature SpectralQuadrature::midpoint(const SpectralSet& set, double spacing, bool round_down) {
  if (!(spacing > 0.0)) throw InvalidArgument("SpectralQuadrature: spacing must be positive");
  SpectralQuadrature q;
  q.order_ = 1;
  q.components_ = set.sqrt_intervals();
  for (std::size_t c = 0; c < q.components_.size(); ++c) {
    const auto& I = q.components_[c];
    const auto n = static_cast<std::size_t>(std::max(1.0, round_down ? std::floor(I.length() / spacing + 1e-9) : std::round(I.length() / spacing)));
    const double h = I.length() / static_cast<double>(n);
    q.spacing_ = std::max(q.spacing_, h);
    for (std::size_t k = 0; k < n; ++k) {
      q.nodes_.push_back(I.a + (static_cast<double>(k) + 0.5) * h);
      q.weights_.push_back(h);
      q.component_.push_back(c);
    }
  }
  return q;
}

SpectralModel::SpectralModel(SpectralSet set, SpectralQuadrature quad, double sigma)
    : set_(std::move(set)), quad_(std::move(quad)), sigma_(sigma) {
  m_.assign(2 * quad_.size(), 0.0);
}

std::vector<cplx> SpectralModel::basis(double x) const {
  std::vector<cplx> out(dim());
  basis(x, out.data());
  return out;
}

Interval SpectralModel::default_window() const {
  const double r = core_radius();
  const double core = std::max(std::abs(warp(-r)), std::abs(warp(r)));
  const double L = core + 40.0 / set_.shortest_sqrt_component();
  return {warp_inv(-L), warp_inv(L)};
}

ToySpectralModel::ToySpectralModel(double p_minus, double p_plus, SpectralSet set, SpectralQuadrature quad)
    : SpectralModel(std::move(set), std::move(quad), 1.0), pm_(p_minus), pp_(p_plus) {
  if (!(p_minus > 0.0 && p_plus > 0.0)) throw InvalidArgument("toy model: p values must be positive");
  const double sm = std::sqrt(pm_), sp = std::sqrt(pp_);
  // Toy density in lambda times d lambda = 2 w dw.
  const double c = 2.0 / (kPi * (sm + sp) * (sm + sp));
  for (std::size_t l = 0; l < nodes(); ++l) {
    m_[2 * l] = quadrature().weights()[l] * c * sm;
    m_[2 * l + 1] = quadrature().weights()[l] * c * sp;
  }
}

std::shared_ptr<const SpectralModel> ToySpectralModel::with_quadrature(SpectralQuadrature quad) const {
  return std::make_shared<ToySpectralModel>(pm_, pp_, spectral_set(), std::move(quad));
}

void ToySpectralModel::basis(double x, cplx* out) const {
  for (std::size_t l = 0; l < nodes(); ++l) {
    const auto f = toy_fundamental(pm_, pp_, lambda(l), x);
    out[2 * l] = f[0];
    out[2 * l + 1] = f[1];
  }
}

void ToySpectralModel::basis_integral(double lo, double hi, cplx* out) const {
  if (!(lo <= hi)) throw InvalidArgument("basis_integral: requires lo <= hi");
  const double sm = std::sqrt(pm_), sp = std::sqrt(pp_);
  const double am = 0.5 * (1.0 + sp / sm), bm = 0.5 * (1.0 - sp / sm);
  const double ap = 0.5 * (1.0 + sm / sp), bp = 0.5 * (1.0 - sm / sp);
  for (std::size_t l = 0; l < nodes(); ++l) {
    const double w = omega(l);
    cplx i0 = 0.0, i1 = 0.0;
    if (lo < 0.0) {
      const double h = std::min(hi, 0.0);
      const double k = w / sm;
      const cplx ep = wave_integral(k, lo, h), em = std::conj(wave_integral(k, lo, h));
      i0 += am * ep + bm * em;
      i1 += em;
    }
    if (hi > 0.0) {
      const double g = std::max(lo, 0.0);
      const double k = w / sp;
      const cplx ep = wave_integral(k, g, hi), em = std::conj(ep);
      i0 += ep;
      i1 += ap * em + bp * ep;
    }
    out[2 * l] = i0;
    out[2 * l + 1] = i1;
  }
}

double ToySpectralModel::warp(double x) const { return x <= 0 ? x / std::sqrt(pm_) : x / std::sqrt(pp_); }
double ToySpectralModel::warp_inv(double s) const { return s <= 0 ? s * std::sqrt(pm_) : s * std::sqrt(pp_); }

SchrodingerSpectralModel::SchrodingerSpectralModel(Potential q, SpectralSet set, SpectralQuadrature quad,
                                                   ScatteringOptions opts)
    : SpectralModel(std::move(set), std::move(quad), 1.0 / std::sqrt(2.0 * kPi)), q_(std::move(q)), opts_(opts) {
  for (std::size_t l = 0; l < nodes(); ++l) m_[2 * l] = m_[2 * l + 1] = quadrature().weights()[l];
  double wmax = 0.0;
  for (double w : quadrature().nodes()) wmax = std::max(wmax, w);
  const ScatteringSolver solver(q_, std::max(wmax, 1e-300), opts);
  sols_.resize(nodes());
  parallel_for(nodes(), [&](std::size_t l) { sols_[l] = solver.solve(omega(l)); });
}

std::shared_ptr<const SpectralModel> SchrodingerSpectralModel::with_quadrature(SpectralQuadrature quad) const {
  return std::make_shared<SchrodingerSpectralModel>(q_, spectral_set(), std::move(quad), opts_);
}

void SchrodingerSpectralModel::basis(double x, cplx* out) const {
  for (std::size_t l = 0; l < nodes(); ++l) {
    const auto v = sols_[l].value(x);
    out[2 * l] = v[0];
    out[2 * l + 1] = v[1];
  }
}

void SchrodingerSpectralModel::basis_integral(double lo, double hi, cplx* out) const {
  if (!(lo <= hi)) throw InvalidArgument("basis_integral: requires lo <= hi");
  for (std::size_t l = 0; l < nodes(); ++l) {
    const auto v = sols_[l].integral(lo, hi);
    out[2 * l] = v[0];
    out[2 * l + 1] = v[1];
  }
}

LiouvilleSpectralModel::LiouvilleSpectralModel(BandwidthProfile profile, SpectralSet set, SpectralQuadrature quad,
                                               ScatteringOptions opts)
    : SpectralModel(set, quad, 1.0 / std::sqrt(2.0 * kPi)), profile_(std::move(profile)), opts_(opts) {
  if (!profile_.positive()) throw InvalidArgument("Liouville model: profile is not admissible");
  inner_ = std::make_shared<SchrodingerSpectralModel>(Potential::from_profile(profile_), std::move(set),
                                                      std::move(quad), opts);
  m_ = inner_->weights();
}

std::shared_ptr<const SpectralModel> LiouvilleSpectralModel::with_quadrature(SpectralQuadrature quad) const {
  return std::make_shared<LiouvilleSpectralModel>(profile_, spectral_set(), std::move(quad), opts_);
}

double LiouvilleSpectralModel::core_radius() const {
  const auto t = profile_.transition();
  return std::max(std::abs(t.a), std::abs(t.b));
}

void LiouvilleSpectralModel::basis(double x, cplx* out) const {
  inner_->basis(profile_.zeta(x), out);
  const double f = std::pow(profile_.value(x), -0.25);
  for (std::size_t i = 0; i < dim(); ++i) out[i] *= f;
}

void LiouvilleSpectralModel::basis_integral(double lo, double hi, cplx* out) const {
  if (!(lo <= hi)) throw InvalidArgument("basis_integral: requires lo <= hi");
  std::fill(out, out + dim(), cplx(0.0));
  std::vector<cplx> tmp(dim());
  const auto t = profile_.transition();
  // Plateaus: dx = p^{1/2} ds turns p^{-1/4} dx into p^{1/4} ds.
  auto plateau = [&](double a, double b, double p) {
    if (!(a < b)) return;
    inner_->basis_integral(profile_.zeta(a), profile_.zeta(b), tmp.data());
    const double f = std::pow(p, 0.25);
    for (std::size_t i = 0; i < dim(); ++i) out[i] += f * tmp[i];
  };
  plateau(lo, std::min(hi, t.a), profile_.p_minus());
  plateau(std::max(lo, t.b), hi, profile_.p_plus());
  const double a = std::max(lo, t.a), b = std::min(hi, t.b);
  if (a < b) {
    double wmax = 0.0;
    for (double w : quadrature().nodes()) wmax = std::max(wmax, w);
    const double kmax = wmax / std::sqrt(profile_.lower_bound());
    const auto rule = composite_gauss_legendre(a, b, std::min(0.05, 2.0 / std::max(kmax, 1e-12)), 12);
    for (std::size_t n = 0; n < rule.size(); ++n) {
      basis(rule.nodes[n], tmp.data());
      for (std::size_t i = 0; i < dim(); ++i) out[i] += rule.weights[n] * tmp[i];
    }
  }
}

HalfLineSpectralModel::HalfLineSpectralModel(SpectralSet set, SpectralQuadrature quad)
    : SpectralModel(std::move(set), std::move(quad), 1.0) {
  for (std::size_t l = 0; l < nodes(); ++l) m_[2 * l] = 2.0 / kPi * quadrature().weights()[l];
}

std::shared_ptr<const SpectralModel> HalfLineSpectralModel::with_quadrature(SpectralQuadrature quad) const {
  return std::make_shared<HalfLineSpectralModel>(spectral_set(), std::move(quad));
}

void HalfLineSpectralModel::basis(double x, cplx* out) const {
  for (std::size_t l = 0; l < nodes(); ++l) {
    out[2 * l] = x >= 0.0 ? std::sin(omega(l) * x) : 0.0;
    out[2 * l + 1] = 0.0;
  }
}

void HalfLineSpectralModel::basis_integral(double lo, double hi, cplx* out) const {
  if (!(lo <= hi)) throw InvalidArgument("basis_integral: requires lo <= hi");
  const double a = std::max(lo, 0.0);
  for (std::size_t l = 0; l < nodes(); ++l) {
    out[2 * l + 1] = 0.0;
    if (!(hi > a)) {
      out[2 * l] = 0.0;
      continue;
    }
    // int_a^b sin(wx) dx = 2 sin(w(a+b)/2) sin(w(b-a)/2) / w
    const double w = omega(l), len = hi - a;
    out[2 * l] = std::sin(0.5 * w * (a + hi)) * len * sinc(0.5 * w * len);
  }
}

std::shared_ptr<ToySpectralModel> make_toy_model(double p_minus, double p_plus, const SpectralSet& set,
                                                 double x_max, int order) {
  return std::make_shared<ToySpectralModel>(p_minus, p_plus, set, SpectralQuadrature::gauss(set, x_max, order));
}

std::shared_ptr<SchrodingerSpectralModel> make_free_model(const SpectralSet& set, double x_max, int order) {
  return make_schrodinger_model(Potential::zero(), set, x_max, order);
}

std::shared_ptr<SchrodingerSpectralModel> make_schrodinger_model(const Potential& q, const SpectralSet& set,
                                                                 double x_max, int order) {
  return std::make_shared<SchrodingerSpectralModel>(q, set, SpectralQuadrature::gauss(set, x_max, order));
}

std::shared_ptr<LiouvilleSpectralModel> make_liouville_model(const BandwidthProfile& profile, const SpectralSet& set,
                                                             double x_max, int order) {
  // The inner grid resolves the warped coordinate.
  const double s_max = std::max(std::abs(profile.zeta(-x_max)), std::abs(profile.zeta(x_max)));
  return std::make_shared<LiouvilleSpectralModel>(profile, set, SpectralQuadrature::gauss(set, s_max, order));
}

std::shared_ptr<HalfLineSpectralModel> make_halfline_model(double omega_top, double x_max, int order) {
  const auto set = SpectralSet::band(omega_top);
  return std::make_shared<HalfLineSpectralModel>(set, SpectralQuadrature::gauss(set, x_max, order));
}

QuadRule spatial_rule(const SpectralModel& model, const Interval& window, int order) {
  double wmax = 0.0;
  for (double w : model.quadrature().nodes()) wmax = std::max(wmax, w);
  const double kappa = 2.0 * wmax / std::sqrt(model.p_min());
  const double panel = std::min(0.5, 5.0 / std::max(kappa, 1e-12));
  return composite_gauss_legendre(window.a, window.b, panel, order);
}

std::vector<cplx> spectral_transform(const SpectralModel& model, const std::function<cplx(double)>& f,
                                     const Interval& window, const TransformOptions& opts) {
  const auto rule = spatial_rule(model, window, opts.order);
  const double edge = 0.05 * window.length();
  std::vector<cplx> values(rule.size());
  double total = 0.0, tail = 0.0;
  for (std::size_t n = 0; n < rule.size(); ++n) {
    values[n] = f(rule.nodes[n]);
    const double e = rule.weights[n] * std::norm(values[n]);
    total += e;
    if (rule.nodes[n] < window.a + edge || rule.nodes[n] > window.b - edge) tail += e;
  }
  std::vector<cplx> F(model.dim(), 0.0);
  if (total == 0.0) return F;
  if (tail > opts.tail_tolerance * total)
    throw TruncationError("spectral_transform: window too small for the function's tails", tail / total);
  std::vector<cplx> phi(model.dim());
  for (std::size_t n = 0; n < rule.size(); ++n) {
    if (values[n] == 0.0) continue;
    model.basis(rule.nodes[n], phi.data());
    const cplx fw = rule.weights[n] * values[n];
    for (std::size_t i = 0; i < F.size(); ++i) F[i] += fw * std::conj(phi[i]);
  }
  for (auto& v : F) v *= model.sigma();
  return F;
}

std::vector<cplx> random_coefficients(const SpectralModel& model, std::mt19937_64& rng, int modes, int taper) {
  std::normal_distribution<double> N(0.0, std::sqrt(0.5));
  const auto& comps = model.quadrature().components();
  std::vector<std::array<std::vector<cplx>, 2>> g(comps.size());
  for (auto& c : g)
    for (auto& comp : c)
      for (int k = 0; k < modes; ++k) comp.emplace_back(N(rng), N(rng));
  std::vector<cplx> F(model.dim());
  double norm2 = 0.0;
  for (std::size_t l = 0; l < model.nodes(); ++l) {
    const std::size_t c = model.quadrature().component(l);
    const double u = (model.omega(l) - comps[c].a) / comps[c].length();
    const double window = std::pow(std::sin(kPi * u), taper);
    for (int j = 0; j < 2; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < modes; ++k) s += g[c][j][k] * std::cos(k * kPi * u);
      F[2 * l + j] = window * s;
      norm2 += model.weights()[2 * l + j] * std::norm(F[2 * l + j]);
    }
  }
  if (norm2 > 0.0)
    for (auto& v : F) v /= std::sqrt(norm2);
  return F;
}

}  // namespace varband
