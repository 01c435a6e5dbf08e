#include "varband/sturm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "varband/error.hpp"

namespace varband {

ToyFundamental toy_fundamental_full(double p_minus, double p_plus, double lambda, double x) {
  if (!(lambda > 0.0)) throw InvalidArgument("toy_fundamental: lambda must be positive");
  if (!(p_minus > 0.0 && p_plus > 0.0)) throw InvalidArgument("toy_fundamental: p values must be positive");
  const double sm = std::sqrt(p_minus), sp = std::sqrt(p_plus);
  const double km = std::sqrt(lambda / p_minus), kp = std::sqrt(lambda / p_plus);
  ToyFundamental out;
  if (x <= 0.0) {
    const double a = 0.5 * (1.0 + sp / sm), b = 0.5 * (1.0 - sp / sm);
    const cplx ep = std::exp(kI * (km * x)), em = std::conj(ep);
    out.phi_plus = a * ep + b * em;
    out.flux_plus = p_minus * kI * km * (a * ep - b * em);
    out.phi_minus = em;
    out.flux_minus = -p_minus * kI * km * em;
  } else {
    const double a = 0.5 * (1.0 + sm / sp), b = 0.5 * (1.0 - sm / sp);
    const cplx ep = std::exp(kI * (kp * x)), em = std::conj(ep);
    out.phi_plus = ep;
    out.flux_plus = p_plus * kI * kp * ep;
    out.phi_minus = a * em + b * ep;
    out.flux_minus = p_plus * kI * kp * (-a * em + b * ep);
  }
  return out;
}

std::array<cplx, 2> toy_fundamental(double p_minus, double p_plus, double lambda, double x) {
  const auto f = toy_fundamental_full(p_minus, p_plus, lambda, x);
  return {f.phi_plus, f.phi_minus};
}

std::array<double, 2> toy_spectral_density(double p_minus, double p_plus, double lambda) {
  if (lambda == 0.0) throw InvalidArgument("toy_spectral_density: singular endpoint lambda = 0");
  if (!(lambda > 0.0)) throw InvalidArgument("toy_spectral_density: lambda must be positive");
  const double sm = std::sqrt(p_minus), sp = std::sqrt(p_plus);
  const double c = 1.0 / (kPi * (sm + sp) * (sm + sp) * std::sqrt(lambda));
  return {sm * c, sp * c};
}

cplx wronskian(cplx f, cplx flux_f, cplx g, cplx flux_g) { return f * flux_g - flux_f * g; }

EigenSolution::EigenSolution(BandwidthProfile profile, double lambda, std::vector<double> xs,
                             std::vector<cplx> phi, std::vector<cplx> flux)
    : profile_(std::move(profile)), lambda_(lambda), xs_(std::move(xs)), phi_(std::move(phi)),
      flux_(std::move(flux)) {}

std::size_t EigenSolution::segment(double x) const {
  if (x < xs_.front() || x > xs_.back()) throw InvalidArgument("EigenSolution: x outside the solved span");
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - xs_.begin());
  return k == 0 ? 0 : std::min(k - 1, xs_.size() - 2);
}

cplx EigenSolution::phi(double x) const {
  if (xs_.size() == 1) return phi_[0];
  const std::size_t k = segment(x);
  const double h = xs_[k + 1] - xs_[k];
  const double t = (x - xs_[k]) / h;
  // Derivatives taken inside the segment, so p is sampled away from its jumps.
  const double pl = profile_.value(xs_[k] + 1e-9 * h), pr = profile_.value(xs_[k + 1] - 1e-9 * h);
  return hermite(t, h, phi_[k], flux_[k] / pl, phi_[k + 1], flux_[k + 1] / pr);
}

cplx EigenSolution::flux(double x) const {
  if (xs_.size() == 1) return flux_[0];
  const std::size_t k = segment(x);
  const double h = xs_[k + 1] - xs_[k];
  const double t = (x - xs_[k]) / h;
  return hermite(t, h, flux_[k], -lambda_ * phi_[k], flux_[k + 1], -lambda_ * phi_[k + 1]);
}

void EigenSolution::write_csv(std::ostream& os) const {
  os << "x,re_phi,im_phi,re_flux,im_flux\n";
  char buf[160];
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", xs_[i], phi_[i].real(), phi_[i].imag(),
                  flux_[i].real(), flux_[i].imag());
    os << buf;
  }
}

double max_stable_step(const BandwidthProfile& profile, double lambda) {
  if (lambda <= 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * kPi * std::sqrt(profile.lower_bound() / lambda) / 20.0;
}

double default_step(const BandwidthProfile& profile, double lambda) {
  if (lambda <= 0.0) return 1e-3;
  return std::min(1e-3, 2.0 * kPi * std::sqrt(profile.lower_bound() / lambda) / 50.0);
}

namespace {

struct State {
  cplx phi, flux;
};

// One RK4 step from x to x + h; p evaluated strictly inside the step so a
// knot at either end never contributes its other one-sided value.
State rk4(const BandwidthProfile& prof, double lambda, double x, double h, const State& s) {
  const double eps = 1e-12 * std::abs(h);
  const double p0 = prof.value(x + eps), pm = prof.value(x + 0.5 * h), p1 = prof.value(x + h - eps);
  const cplx k1p = s.flux / p0, k1f = -lambda * s.phi;
  const cplx k2p = (s.flux + 0.5 * h * k1f) / pm, k2f = -lambda * (s.phi + 0.5 * h * k1p);
  const cplx k3p = (s.flux + 0.5 * h * k2f) / pm, k3f = -lambda * (s.phi + 0.5 * h * k2p);
  const cplx k4p = (s.flux + h * k3f) / p1, k4f = -lambda * (s.phi + h * k3p);
  return {s.phi + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
          s.flux + h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f)};
}

// Grid from x0 towards end, hitting every knot strictly between them.
std::vector<double> march_grid(double x0, double end, double step, const std::vector<double>& knots) {
  std::vector<double> stops;
  for (double k : knots)
    if ((k - x0) * (end - k) > 0) stops.push_back(k);
  std::sort(stops.begin(), stops.end());
  if (end < x0) std::reverse(stops.begin(), stops.end());
  stops.push_back(end);
  std::vector<double> out{x0};
  double from = x0;
  for (double to : stops) {
    const double len = std::abs(to - from);
    if (len == 0.0) continue;
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(len / step - 1e-9)));
    for (std::size_t i = 1; i < n; ++i) out.push_back(from + (to - from) * static_cast<double>(i) / static_cast<double>(n));
    out.push_back(to);
    from = to;
  }
  return out;
}

}  // namespace

EigenSolution solve_eigen(const BandwidthProfile& profile, double lambda, const EigenInit& init,
                          const Interval& span, double step) {
  if (!profile.positive()) throw InvalidArgument("solve_eigen: profile is not admissible");
  if (!(step > 0.0)) throw InvalidArgument("solve_eigen: step must be positive");
  if (!(lambda >= 0.0)) throw InvalidArgument("solve_eigen: lambda must be nonnegative");
  if (!span.contains(init.x0)) throw InvalidArgument("solve_eigen: x0 must lie in the span");
  const double limit = max_stable_step(profile, lambda);
  if (step > limit) {
    std::ostringstream os;
    os << "solve_eigen: step " << step << " exceeds wavelength/20 = " << limit;
    throw StepTooLarge(os.str(), default_step(profile, lambda));
  }
  const auto knots = profile.knots();
  const auto right = march_grid(init.x0, span.b, step, knots);
  const auto left = march_grid(init.x0, span.a, step, knots);

  auto integrate = [&](const std::vector<double>& g) {
    std::vector<State> out{{init.phi, init.flux}};
    for (std::size_t i = 1; i < g.size(); ++i) out.push_back(rk4(profile, lambda, g[i - 1], g[i] - g[i - 1], out.back()));
    return out;
  };
  const auto sr = integrate(right);
  const auto sl = integrate(left);

  std::vector<double> xs;
  std::vector<cplx> phi, flux;
  for (std::size_t i = left.size(); i-- > 1;) {
    xs.push_back(left[i]);
    phi.push_back(sl[i].phi);
    flux.push_back(sl[i].flux);
  }
  for (std::size_t i = 0; i < right.size(); ++i) {
    xs.push_back(right[i]);
    phi.push_back(sr[i].phi);
    flux.push_back(sr[i].flux);
  }
  return EigenSolution(profile, lambda, std::move(xs), std::move(phi), std::move(flux));
}

}  // namespace varband
