#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "varband/profile.hpp"
#include "varband/sample_set.hpp"
#include "varband/sampling.hpp"
#include "varband/spectral.hpp"

namespace varband {

// Finite-window estimates of the mu_p-Beurling densities; never the true limits.
struct DensityReport {
  std::vector<double> r;
  std::vector<std::size_t> inf_count, sup_count;
  std::vector<double> lower, upper;  // counts / r
  double D_minus = 0.0;              // values at the largest r
  double D_plus = 0.0;
  bool monotone_trend = false;       // lower nondecreasing and upper nonincreasing in r
  Interval window;
  std::string label = "finite-window estimates";
};

struct DensityOptions {
  double step_fraction = 1.0 / 50.0;  // slide step r * step_fraction
};

// Slides intervals of mu_p-length r across the window and records min and max of #(X cap I).
DensityReport beurling_density(const BandwidthProfile& profile, const SampleSet& X, const std::vector<double>& r_list,
                               const Interval& window, const DensityOptions& opts = {});

struct Separation {
  double min_gap = 0.0;    // min mu_p([x_i, x_{i+1}])
  std::size_t argmin = 0;  // i of the closest pair
  std::size_t n0 = 0;      // max count in a closed interval of mu_p-length 1
  bool separated = false;  // min_gap > tolerance
};

Separation separation(const BandwidthProfile& profile, const SampleSet& X, double tolerance = 1e-6);

struct GapDensityBound {
  double eta = 0.0;    // max_gap_delta
  double bound = 0.0;  // 1 / eta
  double r_max = 0.0;
  double measured = 0.0;  // D_p^- at r_max on the window
  bool holds = false;     // measured >= bound - 3 / r_max
};

// Window defaults to the hull of X; r_max to a quarter of its mu_p-length.
GapDensityBound gap_density_bound(const BandwidthProfile& profile, const SampleSet& X,
                                  std::optional<Interval> window = std::nullopt);

// Points zeta_inv((j + 1/2) / d) with |(j + 1/2) / d| < W.
SampleSet quasi_uniform_set(const BandwidthProfile& profile, double density, double half_width);

struct LandauRow {
  double density = 0.0;
  double half_width = 0.0;  // W, in zeta coordinates
  FrameEstimate frame;
};

struct LandauOptions {
  // A density counts as stable when A_est > 0 on the largest window and has not fallen
  // below this fraction of its value on the smallest one.
  double stable_fraction = 0.5;
};

struct LandauTable {
  double critical = 0.0;  // |Lambda^{1/2}| / pi
  std::vector<LandauRow> rows;
  std::vector<double> densities;
  std::vector<bool> stable;
  std::optional<double> last_degenerating;  // largest density below first_stable
  std::optional<double> first_stable;       // smallest d with every d' >= d stable
  std::string label = "finite-window estimates, discretized surrogate";
};

// The model must be the spectral model of the profile (free for constant p).
LandauTable landau_sweep(const SpectralModel& model, const BandwidthProfile& profile,
                         const std::vector<double>& density_grid, const std::vector<double>& half_widths,
                         const LandauOptions& opts = {});

void write_density_csv(std::ostream& os, const DensityReport& report);
void write_landau_csv(std::ostream& os, const LandauTable& table);

}  // namespace varband
