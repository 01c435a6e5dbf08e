#include "varband/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "varband/error.hpp"

namespace varband {

namespace {

std::size_t count_in(const std::vector<double>& ys, double a, double b) {
  return static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), b) -
                                  std::lower_bound(ys.begin(), ys.end(), a));
}

}  // namespace

DensityReport beurling_density(const BandwidthProfile& profile, const SampleSet& X, const std::vector<double>& r_list,
                               const Interval& window, const DensityOptions& opts) {
  if (r_list.empty()) throw InvalidArgument("beurling_density: empty r list");
  if (!(opts.step_fraction > 0.0 && opts.step_fraction <= 1.0))
    throw InvalidArgument("beurling_density: step fraction must lie in (0, 1]");
  if (!X.empty() && (X[0] < window.a || X[X.size() - 1] > window.b))
    throw InvalidArgument("beurling_density: samples outside the window");
  const double za = profile.zeta(window.a), zb = profile.zeta(window.b);
  const double total = zb - za;
  std::vector<double> ys(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) ys[i] = profile.zeta(X[i]);

  std::vector<double> rs(r_list);
  std::sort(rs.begin(), rs.end());
  DensityReport rep;
  rep.window = window;
  for (double r : rs) {
    if (!(r > 0.0)) throw InvalidArgument("beurling_density: r must be positive");
    if (r > total / 4.0) throw InvalidArgument("beurling_density: window too small for r");
    const double step = r * opts.step_fraction;
    const auto positions = static_cast<std::size_t>(std::floor((total - r) / step)) + 1;
    std::vector<std::size_t> counts(positions + 1);
    parallel_for(positions + 1, [&](std::size_t k) {
      // Half-open intervals [t, t + r); the last one is flush with the window end.
      const double t = k < positions ? za + static_cast<double>(k) * step : zb - r;
      counts[k] = count_in(ys, t, t + r);
    });
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    rep.r.push_back(r);
    rep.inf_count.push_back(*lo);
    rep.sup_count.push_back(*hi);
    rep.lower.push_back(static_cast<double>(*lo) / r);
    rep.upper.push_back(static_cast<double>(*hi) / r);
  }
  rep.D_minus = rep.lower.back();
  rep.D_plus = rep.upper.back();
  rep.monotone_trend = true;
  for (std::size_t i = 1; i < rep.r.size(); ++i)
    if (rep.lower[i] < rep.lower[i - 1] || rep.upper[i] > rep.upper[i - 1]) rep.monotone_trend = false;
  return rep;
}

Separation separation(const BandwidthProfile& profile, const SampleSet& X, double tolerance) {
  if (X.size() < 2) throw InvalidArgument("separation: need at least two points");
  Separation s;
  s.min_gap = std::numeric_limits<double>::infinity();
  std::vector<double> ys(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) ys[i] = profile.zeta(X[i]);
  for (std::size_t i = 0; i + 1 < X.size(); ++i) {
    const double g = profile.mu(X[i], X[i + 1]);
    if (g < s.min_gap) {
      s.min_gap = g;
      s.argmin = i;
    }
  }
  // A maximal closed unit interval can be taken to start at a point.
  for (std::size_t i = 0, j = 0; i < ys.size(); ++i) {
    j = std::max(j, i);
    while (j + 1 < ys.size() && ys[j + 1] <= ys[i] + 1.0) ++j;
    s.n0 = std::max(s.n0, j - i + 1);
  }
  s.separated = s.min_gap > tolerance;
  return s;
}

GapDensityBound gap_density_bound(const BandwidthProfile& profile, const SampleSet& X, std::optional<Interval> window) {
  if (X.size() < 2) throw InvalidArgument("gap_density_bound: need at least two points");
  const Interval w = window ? *window : Interval{X[0], X[X.size() - 1]};
  GapDensityBound g;
  g.eta = max_gap_delta(profile, X);
  g.bound = 1.0 / g.eta;
  g.r_max = profile.mu(w.a, w.b) / 4.0;
  g.measured = beurling_density(profile, X.restricted(w.a, w.b), {g.r_max}, w).D_minus;
  g.holds = g.measured >= g.bound - 3.0 / g.r_max;
  return g;
}

SampleSet quasi_uniform_set(const BandwidthProfile& profile, double density, double half_width) {
  if (!(density > 0.0) || !(half_width > 0.0))
    throw InvalidArgument("quasi_uniform_set: density and half-width must be positive");
  const auto J = static_cast<long>(std::ceil(density * half_width));
  std::vector<double> xs;
  for (long j = -J - 1; j <= J; ++j) {
    const double y = (static_cast<double>(j) + 0.5) / density;
    if (std::abs(y) < half_width) xs.push_back(profile.zeta_inv(y));
  }
  return SampleSet(std::move(xs));
}

LandauTable landau_sweep(const SpectralModel& model, const BandwidthProfile& profile,
                         const std::vector<double>& density_grid, const std::vector<double>& half_widths,
                         const LandauOptions& opts) {
  if (density_grid.empty() || half_widths.empty()) throw InvalidArgument("landau_sweep: empty grid");
  LandauTable t;
  t.critical = model.spectral_set().sqrt_measure() / kPi;
  t.densities = density_grid;
  std::sort(t.densities.begin(), t.densities.end());
  std::vector<double> ws(half_widths);
  std::sort(ws.begin(), ws.end());
  for (double d : t.densities) {
    double first = 0.0, last = 0.0;
    for (std::size_t k = 0; k < ws.size(); ++k) {
      const double W = ws[k];
      const auto X = quasi_uniform_set(profile, d, W);
      LandauRow row{d, W, {}};
      if (!X.empty()) row.frame = frame_bounds_estimate(model, X, {profile.zeta_inv(-W), profile.zeta_inv(W)});
      if (k == 0) first = row.frame.A_est;
      last = row.frame.A_est;
      t.rows.push_back(row);
    }
    t.stable.push_back(last > 0.0 && last >= opts.stable_fraction * first);
  }
  std::size_t k = t.densities.size();
  while (k > 0 && t.stable[k - 1]) --k;
  if (k < t.densities.size()) t.first_stable = t.densities[k];
  if (k > 0) t.last_degenerating = t.densities[k - 1];
  return t;
}

void write_density_csv(std::ostream& os, const DensityReport& report) {
  os << "r,inf_count_over_r,sup_count_over_r\n";
  char buf[96];
  for (std::size_t i = 0; i < report.r.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", report.r[i], report.lower[i], report.upper[i]);
    os << buf;
  }
}

void write_landau_csv(std::ostream& os, const LandauTable& table) {
  os << "density,window,A_est,B_est,riesz_lower,samples,dimension\n";
  char buf[192];
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%zu,%zu\n", row.density, row.half_width,
                  row.frame.A_est, row.frame.B_est, row.frame.riesz_lower, row.frame.samples, row.frame.dimension);
    os << buf;
  }
}

}  // namespace varband
