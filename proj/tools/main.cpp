#include <CLI11.hpp>
#include <iostream>

#include "cli.hpp"

#ifndef VARBAND_VERSION
#define VARBAND_VERSION "0.0.0"
#endif

int main(int argc, char** argv) {
  using namespace varband::cli;
  CLI::App app{"Variable-bandwidth sampling experiments"};
  app.set_version_flag("--version", VARBAND_VERSION);
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<double> scale;
  std::vector<int> cases;

  const std::vector<std::pair<std::string, std::string>> subs{
      {"kernel", "kernel values, heatmap and diagonal"},
      {"scatter", "scattering coefficients over a frequency grid"},
      {"reconstruct", "iterative reconstruction from samples"},
      {"shannon", "toy Shannon basis: Gram matrix and expansion"},
      {"density", "Beurling density estimates of a sample set"},
      {"landau", "frame-bound sweep across densities"},
      {"selftest", "invariants on the configured model and acceptance criteria"},
  };
  for (const auto& [name, help] : subs) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    s->add_option("--out", out_dir, "output directory")->capture_default_str();
    s->add_option("--seed", seed, "RNG seed (overrides the config)");
    s->add_option("--threads", threads, "worker threads, 0 = hardware (overrides the config)");
    s->add_option("--tolerance-scale", scale, "multiplies every tolerance (overrides the config)")
        ->check(CLI::PositiveNumber);
    if (name == "selftest") s->add_option("--case", cases, "acceptance criteria to run (1-10)")->check(CLI::Range(1, 10));
  }
  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    ExperimentConfig c = config_path.empty() ? parse_config(nlohmann::json::object()) : load_config(config_path);
    if (seed) {
      c.seed = *seed;
      c.raw["seed"] = *seed;
    }
    if (threads) {
      c.threads = *threads;
      c.raw["threads"] = *threads;
    }
    if (scale) {
      c.tolerance_scale = *scale;
      c.raw["tolerance_scale"] = *scale;
    }
    return run(sub, c, cases, {out_dir, VARBAND_VERSION}, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
