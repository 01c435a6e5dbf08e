#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "varband/error.hpp"
#include "varband/profile.hpp"
#include "varband/spectral.hpp"

namespace varband::cli {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ProfileConfig {
  std::string type = "constant";  // constant | toy | piecewise | blend
  double value = 1.0;
  double p_minus = 1.0, p_plus = 1.0, radius = 1.0;
  std::string kind = "cubic";
  std::vector<double> breakpoints, values;
};

struct SampleConfig {
  std::string kind = "lattice";  // lattice (max-gap ratio) | mu_lattice (mu_p step) | points
  double ratio = 0.9;
  double step = 1.0;
  double jitter = 0.0;  // fraction of the smaller neighbouring half-gap
  std::vector<double> points;
};

struct ExperimentConfig {
  ProfileConfig profile;
  std::string model = "auto";  // auto | schrodinger | halfline
  std::vector<Interval> spectral{{0.0, 1.0}};
  double x_max = 60.0;
  int order = 10;
  std::optional<Interval> window;
  std::uint64_t seed = 1;
  double tolerance_scale = 1.0;
  unsigned threads = 0;

  struct {
    int random_pairs = 100;
    std::vector<std::pair<double, double>> pairs;
    int heatmap_points = 41;
    int diagonal_points = 201;
  } kernel;
  struct {
    double omega_min = 0.05, omega_max = 3.0;
    int nodes = 60;
    std::string potential = "profile";  // profile | square_well | zero
    double depth = 1.0, radius = 1.0;
  } scatter;
  struct {
    SampleConfig samples;
    int n_max = 60;
    double tol = 1e-10;
    int taper = 6;
    int divergence_run = 3;
    int grid_points = 401;
  } reconstruct;
  struct {
    int J = 20;
    int expansion_J = 200;
    int functions = 3;
    int eval_points = 401;
  } shannon;
  struct {
    SampleConfig samples{"mu_lattice", 0.9, 1.0, 0.3, {}};
    std::vector<double> r;  // empty: quarter, eighth, ... of the window's mu_p-length
    double step_fraction = 0.02;
  } density;
  struct {
    std::vector<double> densities;  // relative to |Lambda^{1/2}| / pi
    std::vector<double> half_widths;
    double stable_fraction = 0.5;
  } landau;
  struct {
    std::vector<int> criteria;
    bool invariants = true;
  } selftest;

  nlohmann::json raw;
};

// Parses and validates; error messages name the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

BandwidthProfile build_profile(const ExperimentConfig& c);
SpectralSet build_spectral_set(const ExperimentConfig& c);
Interval window_of(const ExperimentConfig& c);
ModelPtr build_model(const ExperimentConfig& c);

std::string config_hash(const nlohmann::json& j);

struct RunContext {
  std::string out_dir = ".";
  std::string version = "0";
};

// Runs one subcommand, writes CSV files and <subcommand>_report.json into out_dir.
// Returns the process exit code.
int run(const std::string& subcommand, const ExperimentConfig& config, const RunContext& ctx, std::ostream& log);
// selftest additionally runs the given acceptance criteria.
int run(const std::string& subcommand, const ExperimentConfig& config, const std::vector<int>& cases,
        const RunContext& ctx, std::ostream& log);

}  // namespace varband::cli
