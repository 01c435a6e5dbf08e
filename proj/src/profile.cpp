#include "varband/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "varband/error.hpp"

namespace varband {

Interval::Interval(double lo, double hi) : a(lo), b(hi) {
  if (!(lo <= hi)) throw InvalidArgument("Interval: requires a <= b");
}

namespace {

constexpr int kSmoothCells = 512;
constexpr int kPartialOrder = 20;

// Antiderivative table of p^e: exact per cell for piecewise profiles,
// adaptive cell integrals plus Gauss-Legendre partials for smooth ones.
struct WarpTable {
  double e = -0.5;
  std::vector<double> knots;
  std::vector<double> cum;
  std::vector<double> rates;  // per cell, piecewise only
  double left_rate = 1.0;
  double right_rate = 1.0;
  std::function<double(double)> p;  // smooth only

  std::size_t cells() const { return knots.size() - 1; }

  double integrand(double x) const { return std::pow(p(x), e); }

  double partial(std::size_t k, double a, double b) const {
    if (!p) return (b - a) * rates[k];
    const QuadRule& gl = gauss_legendre(kPartialOrder);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < gl.size(); ++i) s += gl.weights[i] * integrand(mid + half * gl.nodes[i]);
    return s * half;
  }

  // -1 for the left plateau, cells() for the right plateau.
  long locate(double x) const {
    return static_cast<long>(std::upper_bound(knots.begin(), knots.end(), x) - knots.begin()) - 1;
  }

  double measure(double a, double b) const {
    if (a == b) return 0.0;
    const long M = static_cast<long>(cells());
    const long ka = locate(a), kb = locate(b);
    if (ka == kb) {
      if (ka < 0) return (b - a) * left_rate;
      if (ka >= M) return (b - a) * right_rate;
      return partial(static_cast<std::size_t>(ka), a, b);
    }
    double s = 0.0;
    long first_full;
    if (ka < 0) {
      s += (knots[0] - a) * left_rate;
      first_full = 0;
    } else {
      s += partial(static_cast<std::size_t>(ka), a, knots[ka + 1]);
      first_full = ka + 1;
    }
    const long last_knot = std::min(kb, M);
    s += cum[last_knot] - cum[first_full];
    if (kb >= M) {
      s += (b - knots[M]) * right_rate;
    } else {
      s += partial(static_cast<std::size_t>(kb), knots[kb], b);
    }
    return s;
  }

  double antiderivative(double x) const { return x >= knots[0] ? measure(knots[0], x) : -measure(x, knots[0]); }

  double signed_from_zero(double x) const { return x >= 0 ? measure(0.0, x) : -measure(x, 0.0); }

  double inverse(double y) const {
    const double target = antiderivative(0.0) + y;
    const std::size_t M = cells();
    if (target <= 0.0) return knots[0] + target / left_rate;
    if (target >= cum[M]) return knots[M] + (target - cum[M]) / right_rate;
    std::size_t k = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin()) - 1;
    k = std::min(k, M - 1);
    const double local = target - cum[k];
    double lo = knots[k], hi = knots[k + 1];
    if (!p) return std::clamp(lo + local / rates[k], lo, hi);
    double x = lo + (hi - lo) * local / (cum[k + 1] - cum[k]);
    for (int it = 0; it < 200; ++it) {
      const double r = partial(k, knots[k], x) - local;
      if (std::abs(r) <= 1e-12) return x;
      if (r > 0) hi = x; else lo = x;
      double next = x - r / integrand(x);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) return next;
      x = next;
    }
    throw ConvergenceError("warp inverse did not converge", std::abs(partial(k, knots[k], x) - local));
  }
};

WarpTable build_piecewise_table(const PiecewiseConstant& pc, double e) {
  WarpTable t;
  t.e = e;
  t.knots = pc.breakpoints.empty() ? std::vector<double>{0.0} : pc.breakpoints;
  t.left_rate = std::pow(pc.values.front(), e);
  t.right_rate = std::pow(pc.values.back(), e);
  t.cum.assign(t.knots.size(), 0.0);
  for (std::size_t k = 0; k + 1 < t.knots.size(); ++k) {
    t.rates.push_back(std::pow(pc.values[k + 1], e));
    t.cum[k + 1] = t.cum[k] + (t.knots[k + 1] - t.knots[k]) * t.rates.back();
  }
  return t;
}

WarpTable build_smooth_table(const SmoothEventuallyConstant& s, double e) {
  WarpTable t;
  t.e = e;
  t.p = s.p;
  t.left_rate = std::pow(s.p_minus, e);
  t.right_rate = std::pow(s.p_plus, e);
  t.knots.resize(kSmoothCells + 1);
  for (int k = 0; k <= kSmoothCells; ++k)
    t.knots[k] = -s.radius + 2.0 * s.radius * k / kSmoothCells;
  t.knots.back() = s.radius;
  t.cum.assign(t.knots.size(), 0.0);
  auto f = [&](double x) { return std::pow(s.p(x), e); };
  for (int k = 0; k < kSmoothCells; ++k)
    t.cum[k + 1] = t.cum[k] + integrate_adaptive(f, t.knots[k], t.knots[k + 1]);
  return t;
}

}  // namespace

struct BandwidthProfile::Impl {
  std::variant<PiecewiseConstant, SmoothEventuallyConstant> kind;
  double lower = 0.0;
  double upper = 0.0;
  double p_minus = 1.0;
  double p_plus = 1.0;
  bool positive = true;
  WarpTable zeta;
  WarpTable eta;
};

namespace {

void finish(BandwidthProfile::Impl& impl) {
  impl.positive = impl.lower > 0.0 && std::isfinite(impl.upper);
  if (!impl.positive) return;
  if (auto* pc = std::get_if<PiecewiseConstant>(&impl.kind)) {
    impl.zeta = build_piecewise_table(*pc, -0.5);
    impl.eta = build_piecewise_table(*pc, -1.0);
  } else {
    const auto& s = std::get<SmoothEventuallyConstant>(impl.kind);
    impl.zeta = build_smooth_table(s, -0.5);
    impl.eta = build_smooth_table(s, -1.0);
  }
}

double blend_step(double t, BlendKind kind, int order) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return order == 0 ? 1.0 : 0.0;
  if (kind == BlendKind::cubic) {
    switch (order) {
      case 0: return t * t * (3.0 - 2.0 * t);
      case 1: return 6.0 * t * (1.0 - t);
      default: return 6.0 - 12.0 * t;
    }
  }
  switch (order) {
    case 0: return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    case 1: return 30.0 * t * t * (1.0 - t) * (1.0 - t);
    default: return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
  }
}

}  // namespace

BandwidthProfile BandwidthProfile::constant(double value) { return piecewise({}, {value}); }

BandwidthProfile BandwidthProfile::piecewise(std::vector<double> breakpoints, std::vector<double> values) {
  if (values.size() != breakpoints.size() + 1)
    throw InvalidArgument("piecewise profile: plateau count must equal breakpoint count + 1");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!std::isfinite(breakpoints[i])) throw InvalidArgument("piecewise profile: non-finite breakpoint");
    if (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))
      throw InvalidArgument("piecewise profile: breakpoints must be strictly increasing");
  }
  for (double v : values)
    if (std::isnan(v)) throw InvalidArgument("piecewise profile: NaN plateau value");
  auto impl = std::make_shared<Impl>();
  impl->lower = *std::min_element(values.begin(), values.end());
  impl->upper = *std::max_element(values.begin(), values.end());
  impl->p_minus = values.front();
  impl->p_plus = values.back();
  impl->kind = PiecewiseConstant{std::move(breakpoints), std::move(values)};
  finish(*impl);
  return BandwidthProfile(std::move(impl));
}

BandwidthProfile BandwidthProfile::toy(double p_minus, double p_plus) {
  return piecewise({0.0}, {p_minus, p_plus});
}

BandwidthProfile BandwidthProfile::smooth(SmoothEventuallyConstant s) {
  if (!s.p || !s.dp || !s.d2p) throw InvalidArgument("smooth profile: p, p', p'' are all required");
  if (!(s.radius > 0.0) || !std::isfinite(s.radius))
    throw InvalidArgument("smooth profile: plateau radius must be positive");
  const double R = s.radius;
  for (double off : {1e-9, 0.5, 3.0}) {
    const double xl = -R * (1.0 + off), xr = R * (1.0 + off);
    if (std::abs(s.p(xl) - s.p_minus) > 1e-12 * std::max(1.0, std::abs(s.p_minus)) ||
        std::abs(s.p(xr) - s.p_plus) > 1e-12 * std::max(1.0, std::abs(s.p_plus)))
      throw InvalidArgument("smooth profile: p is not constant outside [-R, R]");
  }
  // Derivative consistency on interior points kept away from +-R.
  const int n = 41;
  const double h = 1e-4 * R;
  double max_dp = 0.0, max_d2p = 0.0;
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = -R + 2.0 * R * (i + 0.5) / n;
    max_dp = std::max(max_dp, std::abs(s.dp(xs[i])));
    max_d2p = std::max(max_d2p, std::abs(s.d2p(xs[i])));
  }
  for (double x : xs) {
    const double fd1 = (s.p(x + h) - s.p(x - h)) / (2 * h);
    const double fd2 = (s.dp(x + h) - s.dp(x - h)) / (2 * h);
    if (std::abs(fd1 - s.dp(x)) > 1e-4 * std::max(1.0, max_dp)) {
      std::ostringstream os;
      os << "smooth profile: p' disagrees with finite differences at x=" << x;
      throw InvalidArgument(os.str());
    }
    if (std::abs(fd2 - s.d2p(x)) > 1e-4 * std::max(1.0, max_d2p)) {
      std::ostringstream os;
      os << "smooth profile: p'' disagrees with finite differences at x=" << x;
      throw InvalidArgument(os.str());
    }
  }
  auto impl = std::make_shared<Impl>();
  double lo = std::min(s.p_minus, s.p_plus), hi = std::max(s.p_minus, s.p_plus);
  const int scan = 6001;
  for (int i = 0; i < scan; ++i) {
    const double v = s.p(-3 * R + 6 * R * i / (scan - 1));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  impl->lower = lo;
  impl->upper = hi;
  impl->p_minus = s.p_minus;
  impl->p_plus = s.p_plus;
  impl->kind = std::move(s);
  finish(*impl);
  return BandwidthProfile(std::move(impl));
}

BandwidthProfile BandwidthProfile::blend(double p_minus, double p_plus, double radius, BlendKind kind) {
  if (!(radius > 0.0)) throw InvalidArgument("blend profile: radius must be positive");
  SmoothEventuallyConstant s;
  const double jump = p_plus - p_minus;
  const double R = radius;
  s.p = [=](double x) { return p_minus + jump * blend_step((x + R) / (2 * R), kind, 0); };
  s.dp = [=](double x) { return jump * blend_step((x + R) / (2 * R), kind, 1) / (2 * R); };
  s.d2p = [=](double x) { return jump * blend_step((x + R) / (2 * R), kind, 2) / (4 * R * R); };
  s.radius = R;
  s.p_minus = p_minus;
  s.p_plus = p_plus;
  return smooth(std::move(s));
}

bool BandwidthProfile::is_piecewise() const { return std::holds_alternative<PiecewiseConstant>(impl_->kind); }

const PiecewiseConstant& BandwidthProfile::piecewise_data() const {
  if (!is_piecewise()) throw InvalidArgument("profile is not piecewise constant");
  return std::get<PiecewiseConstant>(impl_->kind);
}

const SmoothEventuallyConstant& BandwidthProfile::smooth_data() const {
  if (is_piecewise()) throw InvalidArgument("profile is not smooth");
  return std::get<SmoothEventuallyConstant>(impl_->kind);
}

double BandwidthProfile::value(double x) const {
  if (const auto* pc = std::get_if<PiecewiseConstant>(&impl_->kind)) {
    const auto i = std::upper_bound(pc->breakpoints.begin(), pc->breakpoints.end(), x) - pc->breakpoints.begin();
    return pc->values[static_cast<std::size_t>(i)];
  }
  const auto& s = std::get<SmoothEventuallyConstant>(impl_->kind);
  if (x < -s.radius) return s.p_minus;
  if (x > s.radius) return s.p_plus;
  return s.p(x);
}

double BandwidthProfile::derivative(double x) const {
  if (is_piecewise()) return 0.0;
  const auto& s = smooth_data();
  return std::abs(x) >= s.radius ? 0.0 : s.dp(x);
}

double BandwidthProfile::second_derivative(double x) const {
  if (is_piecewise()) return 0.0;
  const auto& s = smooth_data();
  return std::abs(x) >= s.radius ? 0.0 : s.d2p(x);
}

double BandwidthProfile::lower_bound() const { return impl_->lower; }
double BandwidthProfile::upper_bound() const { return impl_->upper; }
double BandwidthProfile::p_minus() const { return impl_->p_minus; }
double BandwidthProfile::p_plus() const { return impl_->p_plus; }
bool BandwidthProfile::positive() const { return impl_->positive; }

Interval BandwidthProfile::transition() const {
  if (const auto* pc = std::get_if<PiecewiseConstant>(&impl_->kind)) {
    if (pc->breakpoints.empty()) return {0.0, 0.0};
    return {pc->breakpoints.front(), pc->breakpoints.back()};
  }
  const double R = smooth_data().radius;
  return {-R, R};
}

std::vector<double> BandwidthProfile::knots() const {
  if (const auto* pc = std::get_if<PiecewiseConstant>(&impl_->kind)) return pc->breakpoints;
  const double R = smooth_data().radius;
  return {-R, R};
}

std::string BandwidthProfile::describe() const {
  std::ostringstream os;
  if (const auto* pc = std::get_if<PiecewiseConstant>(&impl_->kind)) {
    os << "piecewise(" << pc->breakpoints.size() << " breakpoints, p-=" << impl_->p_minus
       << ", p+=" << impl_->p_plus << ")";
  } else {
    os << "smooth(R=" << smooth_data().radius << ", p-=" << impl_->p_minus << ", p+=" << impl_->p_plus << ")";
  }
  return os.str();
}

namespace {
void require_positive(const BandwidthProfile::Impl& impl) {
  if (!impl.positive) throw InvalidArgument("profile is not bounded below by a positive constant");
}
}  // namespace

double BandwidthProfile::zeta(double x) const {
  require_positive(*impl_);
  return impl_->zeta.signed_from_zero(x);
}

double BandwidthProfile::zeta_inv(double y) const {
  require_positive(*impl_);
  return impl_->zeta.inverse(y);
}

double BandwidthProfile::eta(double x) const {
  require_positive(*impl_);
  return impl_->eta.signed_from_zero(x);
}

double BandwidthProfile::eta_inv(double y) const {
  require_positive(*impl_);
  return impl_->eta.inverse(y);
}

double BandwidthProfile::mu(double a, double b) const {
  require_positive(*impl_);
  if (!(a <= b)) throw InvalidArgument("mu: requires a <= b");
  return impl_->zeta.measure(a, b);
}

double BandwidthProfile::eta_measure(double a, double b) const {
  require_positive(*impl_);
  if (!(a <= b)) throw InvalidArgument("eta_measure: requires a <= b");
  return impl_->eta.measure(a, b);
}

double eval_p(const BandwidthProfile& profile, double x) { return profile.value(x); }
double mu_p(const BandwidthProfile& profile, const Interval& I) { return profile.mu(I.a, I.b); }
double zeta(const BandwidthProfile& profile, double x) { return profile.zeta(x); }
double zeta_inv(const BandwidthProfile& profile, double y) { return profile.zeta_inv(y); }
double eta(const BandwidthProfile& profile, double x) { return profile.eta(x); }
double eta_inv(const BandwidthProfile& profile, double y) { return profile.eta_inv(y); }

double potential_q(const BandwidthProfile& profile, double x) {
  if (profile.is_piecewise()) {
    if (profile.piecewise_data().breakpoints.empty()) return 0.0;
    throw UnsupportedProfile("potential_q: q is distributional for piecewise-constant p");
  }
  const auto& s = profile.smooth_data();
  if (std::abs(x) >= s.radius) return 0.0;
  const double p = s.p(x), dp = s.dp(x), d2p = s.d2p(x);
  return d2p / 4.0 - dp * dp / (16.0 * p);
}

double gap_essinf_p(const BandwidthProfile& profile, double a, double b) {
  if (!(a < b)) throw InvalidArgument("gap_essinf_p: requires a < b");
  if (profile.is_piecewise()) {
    const auto& pc = profile.piecewise_data();
    const auto& bp = pc.breakpoints;
    const auto first = static_cast<std::size_t>(std::upper_bound(bp.begin(), bp.end(), a) - bp.begin());
    const auto last = static_cast<std::size_t>(std::lower_bound(bp.begin(), bp.end(), b) - bp.begin());
    return *std::min_element(pc.values.begin() + static_cast<long>(first),
                             pc.values.begin() + static_cast<long>(last) + 1);
  }
  const auto& s = profile.smooth_data();
  const double R = s.radius;
  double m = std::numeric_limits<double>::infinity();
  if (a < -R) m = std::min(m, s.p_minus);
  if (b > R) m = std::min(m, s.p_plus);
  const double lo = std::max(a, -R), hi = std::min(b, R);
  if (lo < hi) {
    const int n = 257;
    for (int i = 0; i < n; ++i) m = std::min(m, s.p(lo + (hi - lo) * i / (n - 1)));
  }
  return m;
}

std::vector<double> gap_ratios(const BandwidthProfile& profile, const SampleSet& X) {
  std::vector<double> out;
  if (X.size() < 2) return out;
  out.reserve(X.size() - 1);
  for (std::size_t i = 0; i + 1 < X.size(); ++i)
    out.push_back((X[i + 1] - X[i]) / std::sqrt(gap_essinf_p(profile, X[i], X[i + 1])));
  return out;
}

double max_gap_delta(const BandwidthProfile& profile, const SampleSet& X) {
  if (X.size() < 2) throw InvalidArgument("max_gap_delta: needs at least two points");
  const auto r = gap_ratios(profile, X);
  return *std::max_element(r.begin(), r.end());
}

AdmissibilityReport admissibility_check(const BandwidthProfile& profile) {
  AdmissibilityReport rep;
  rep.lower = profile.lower_bound();
  rep.upper = profile.upper_bound();
  if (!(rep.lower > 0.0)) {
    rep.pass = false;
    rep.reasons.push_back("not bounded below");
  }
  if (!std::isfinite(rep.upper)) {
    rep.pass = false;
    rep.reasons.push_back("not bounded above");
  }
  if (profile.is_smooth()) {
    const auto& s = profile.smooth_data();
    for (double x : {-2.0 * s.radius, -1.5 * s.radius, 1.5 * s.radius, 2.0 * s.radius}) {
      const double plateau = x < 0 ? s.p_minus : s.p_plus;
      if (s.p(x) != plateau || s.dp(x) != 0.0 || s.d2p(x) != 0.0) {
        rep.pass = false;
        rep.reasons.push_back("not eventually constant");
        break;
      }
    }
  }
  if (rep.pass) rep.reasons.push_back("P(x) = int_0^x 1/p grows linearly at both ends, so it is not in L2");
  return rep;
}

}  // namespace varband
