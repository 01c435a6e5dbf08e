#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "cli.hpp"

namespace varband::cli {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ConfigError((where.empty() ? k : where + "." + k) + ": unknown field");
}

std::string path(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }

double number(const json& j, const std::string& where, const char* key, double def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(path(where, key) + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path(where, key) + ": must be finite");
  return x;
}

double positive(const json& j, const std::string& where, const char* key, double def) {
  const double x = number(j, where, key, def);
  if (!(x > 0.0)) throw ConfigError(path(where, key) + ": must be positive");
  return x;
}

int integer(const json& j, const std::string& where, const char* key, int def, int lo) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(path(where, key) + ": expected an integer");
  const auto x = v.get<long long>();
  if (x < lo || x > 1000000000) throw ConfigError(path(where, key) + ": must be at least " + std::to_string(lo));
  return static_cast<int>(x);
}

std::string text(const json& j, const std::string& where, const char* key, const std::string& def,
                 std::initializer_list<const char*> allowed) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(path(where, key) + ": expected a string");
  const auto s = v.get<std::string>();
  std::string list;
  for (const char* a : allowed) {
    if (s == a) return s;
    list += std::string(list.empty() ? "" : ", ") + a;
  }
  throw ConfigError(path(where, key) + ": '" + s + "' is not one of " + list);
}

std::vector<double> numbers(const json& j, const std::string& where, const char* key, std::vector<double> def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_array()) throw ConfigError(path(where, key) + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(path(where, key) + "[" + std::to_string(i) + "]: expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

Interval interval(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(where + ": expected [a, b]");
  const double a = v[0].get<double>(), b = v[1].get<double>();
  if (!(a < b)) throw ConfigError(where + ": needs a < b");
  return {a, b};
}

SampleConfig samples(const json& j, const std::string& where, SampleConfig s) {
  if (!j.contains("samples")) return s;
  const auto& v = j.at("samples");
  const std::string w = path(where, "samples");
  only_keys(v, w, {"kind", "ratio", "step", "jitter", "points"});
  s.kind = text(v, w, "kind", s.kind, {"lattice", "mu_lattice", "points"});
  s.ratio = positive(v, w, "ratio", s.ratio);
  s.step = positive(v, w, "step", s.step);
  s.jitter = number(v, w, "jitter", s.jitter);
  if (s.jitter < 0.0 || s.jitter >= 1.0) throw ConfigError(w + ".jitter: must lie in [0, 1)");
  s.points = numbers(v, w, "points", {});
  if (s.kind == "points") {
    if (s.points.empty()) throw ConfigError(w + ".points: required for kind 'points'");
    for (std::size_t i = 1; i < s.points.size(); ++i)
      if (!(s.points[i] > s.points[i - 1])) throw ConfigError(w + ".points: must be strictly increasing");
  }
  return s;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  c.raw = j;
  only_keys(j, "", {"profile", "model", "spectral_set", "quadrature", "window", "seed", "tolerance_scale", "threads",
                    "kernel", "scatter", "reconstruct", "shannon", "density", "landau", "selftest"});
  if (j.contains("profile")) {
    const auto& p = j.at("profile");
    only_keys(p, "profile", {"type", "value", "p_minus", "p_plus", "radius", "kind", "breakpoints", "values"});
    auto& pc = c.profile;
    pc.type = text(p, "profile", "type", "constant", {"constant", "toy", "piecewise", "blend"});
    pc.value = positive(p, "profile", "value", 1.0);
    pc.p_minus = positive(p, "profile", "p_minus", 1.0);
    pc.p_plus = positive(p, "profile", "p_plus", 1.0);
    pc.radius = positive(p, "profile", "radius", 1.0);
    pc.kind = text(p, "profile", "kind", "cubic", {"cubic", "quintic"});
    pc.breakpoints = numbers(p, "profile", "breakpoints", {});
    pc.values = numbers(p, "profile", "values", {});
    if (pc.type == "piecewise" && pc.values.size() != pc.breakpoints.size() + 1)
      throw ConfigError("profile.values: needs one more entry than profile.breakpoints");
  }
  c.model = text(j, "", "model", "auto", {"auto", "schrodinger", "halfline"});
  if (j.contains("spectral_set")) {
    const auto& s = j.at("spectral_set");
    only_keys(s, "spectral_set", {"band", "intervals"});
    if (s.contains("band") == s.contains("intervals"))
      throw ConfigError("spectral_set: give exactly one of 'band' or 'intervals'");
    if (s.contains("band")) {
      c.spectral = {{0.0, positive(s, "spectral_set", "band", 1.0)}};
    } else {
      const auto& v = s.at("intervals");
      if (!v.is_array() || v.empty()) throw ConfigError("spectral_set.intervals: expected a nonempty array");
      c.spectral.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto I = interval(v[i], "spectral_set.intervals[" + std::to_string(i) + "]");
        if (I.a < 0.0) throw ConfigError("spectral_set.intervals[" + std::to_string(i) + "]: must lie in [0, inf)");
        if (!c.spectral.empty() && I.a <= c.spectral.back().b)
          throw ConfigError("spectral_set.intervals[" + std::to_string(i) + "]: intervals must be sorted and disjoint");
        c.spectral.push_back(I);
      }
    }
  }
  if (j.contains("quadrature")) {
    const auto& q = j.at("quadrature");
    only_keys(q, "quadrature", {"x_max", "order"});
    c.x_max = positive(q, "quadrature", "x_max", c.x_max);
    c.order = integer(q, "quadrature", "order", c.order, 2);
  }
  if (j.contains("window")) c.window = interval(j.at("window"), "window");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed: expected a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  c.tolerance_scale = positive(j, "", "tolerance_scale", 1.0);
  c.threads = static_cast<unsigned>(integer(j, "", "threads", 0, 0));

  if (j.contains("kernel")) {
    const auto& k = j.at("kernel");
    only_keys(k, "kernel", {"random_pairs", "pairs", "heatmap_points", "diagonal_points"});
    c.kernel.random_pairs = integer(k, "kernel", "random_pairs", c.kernel.random_pairs, 0);
    c.kernel.heatmap_points = integer(k, "kernel", "heatmap_points", c.kernel.heatmap_points, 0);
    c.kernel.diagonal_points = integer(k, "kernel", "diagonal_points", c.kernel.diagonal_points, 2);
    if (k.contains("pairs")) {
      const auto& v = k.at("pairs");
      if (!v.is_array()) throw ConfigError("kernel.pairs: expected an array of [x, y]");
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_array() || v[i].size() != 2 || !v[i][0].is_number() || !v[i][1].is_number())
          throw ConfigError("kernel.pairs[" + std::to_string(i) + "]: expected [x, y]");
        c.kernel.pairs.emplace_back(v[i][0].get<double>(), v[i][1].get<double>());
      }
    }
  }
  if (j.contains("scatter")) {
    const auto& s = j.at("scatter");
    only_keys(s, "scatter", {"omega_min", "omega_max", "nodes", "potential", "depth", "radius"});
    c.scatter.omega_min = positive(s, "scatter", "omega_min", c.scatter.omega_min);
    c.scatter.omega_max = positive(s, "scatter", "omega_max", c.scatter.omega_max);
    if (!(c.scatter.omega_max > c.scatter.omega_min)) throw ConfigError("scatter.omega_max: must exceed omega_min");
    c.scatter.nodes = integer(s, "scatter", "nodes", c.scatter.nodes, 1);
    c.scatter.potential = text(s, "scatter", "potential", "profile", {"profile", "square_well", "zero"});
    c.scatter.depth = number(s, "scatter", "depth", c.scatter.depth);
    c.scatter.radius = positive(s, "scatter", "radius", c.scatter.radius);
  }
  if (j.contains("reconstruct")) {
    const auto& r = j.at("reconstruct");
    only_keys(r, "reconstruct", {"samples", "n_max", "tol", "taper", "divergence_run", "grid_points"});
    c.reconstruct.samples = samples(r, "reconstruct", c.reconstruct.samples);
    c.reconstruct.n_max = integer(r, "reconstruct", "n_max", c.reconstruct.n_max, 0);
    c.reconstruct.tol = number(r, "reconstruct", "tol", c.reconstruct.tol);
    if (c.reconstruct.tol < 0.0) throw ConfigError("reconstruct.tol: must be nonnegative");
    c.reconstruct.taper = integer(r, "reconstruct", "taper", c.reconstruct.taper, 0);
    c.reconstruct.divergence_run = integer(r, "reconstruct", "divergence_run", c.reconstruct.divergence_run, 1);
    c.reconstruct.grid_points = integer(r, "reconstruct", "grid_points", c.reconstruct.grid_points, 2);
  }
  if (j.contains("shannon")) {
    const auto& s = j.at("shannon");
    only_keys(s, "shannon", {"J", "expansion_J", "functions", "eval_points"});
    c.shannon.J = integer(s, "shannon", "J", c.shannon.J, 0);
    c.shannon.expansion_J = integer(s, "shannon", "expansion_J", c.shannon.expansion_J, 0);
    c.shannon.functions = integer(s, "shannon", "functions", c.shannon.functions, 0);
    c.shannon.eval_points = integer(s, "shannon", "eval_points", c.shannon.eval_points, 2);
  }
  if (j.contains("density")) {
    const auto& d = j.at("density");
    only_keys(d, "density", {"samples", "r", "step_fraction"});
    c.density.samples = samples(d, "density", c.density.samples);
    c.density.r = numbers(d, "density", "r", {});
    for (double r : c.density.r)
      if (!(r > 0.0)) throw ConfigError("density.r: entries must be positive");
    c.density.step_fraction = positive(d, "density", "step_fraction", c.density.step_fraction);
    if (c.density.step_fraction > 1.0) throw ConfigError("density.step_fraction: must not exceed 1");
  }
  if (j.contains("landau")) {
    const auto& l = j.at("landau");
    only_keys(l, "landau", {"densities", "half_widths", "stable_fraction"});
    c.landau.densities = numbers(l, "landau", "densities", {});
    c.landau.half_widths = numbers(l, "landau", "half_widths", {});
    for (double d : c.landau.densities)
      if (!(d > 0.0)) throw ConfigError("landau.densities: entries must be positive");
    for (double w : c.landau.half_widths)
      if (!(w > 0.0)) throw ConfigError("landau.half_widths: entries must be positive");
    c.landau.stable_fraction = positive(l, "landau", "stable_fraction", c.landau.stable_fraction);
  }
  if (c.landau.densities.empty())
    for (int k = 5; k <= 15; ++k) c.landau.densities.push_back(0.1 * k);
  if (c.landau.half_widths.empty()) c.landau.half_widths = {10 * kPi + 1, 20 * kPi + 1, 40 * kPi + 1};
  if (j.contains("selftest")) {
    const auto& s = j.at("selftest");
    only_keys(s, "selftest", {"criteria", "invariants"});
    for (double x : numbers(s, "selftest", "criteria", {})) {
      if (x != std::floor(x) || x < 1 || x > 10) throw ConfigError("selftest.criteria: entries must be integers 1..10");
      c.selftest.criteria.push_back(static_cast<int>(x));
    }
    if (s.contains("invariants")) {
      if (!s.at("invariants").is_boolean()) throw ConfigError("selftest.invariants: expected true or false");
      c.selftest.invariants = s.at("invariants").get<bool>();
    }
  }

  // Module preconditions that need more than one field.
  const auto profile = build_profile(c);
  const auto adm = admissibility_check(profile);
  if (!adm.pass) throw ConfigError("profile: " + (adm.reasons.empty() ? std::string("not admissible") : adm.reasons.front()));
  const Interval w = window_of(c);
  if (w.a < -c.x_max || w.b > c.x_max) throw ConfigError("window: must lie inside [-x_max, x_max]");
  if (c.model == "halfline" && c.spectral.size() != 1) throw ConfigError("spectral_set: the half-line model needs a band");
  if (c.model == "halfline" && c.spectral.front().a != 0.0) throw ConfigError("spectral_set: the half-line model needs a band");
  return c;
}

ExperimentConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file);
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(file + ": " + e.what());
  }
  return parse_config(j);
}

BandwidthProfile build_profile(const ExperimentConfig& c) {
  const auto& p = c.profile;
  try {
    if (p.type == "constant") return BandwidthProfile::constant(p.value);
    if (p.type == "toy") return BandwidthProfile::toy(p.p_minus, p.p_plus);
    if (p.type == "piecewise") return BandwidthProfile::piecewise(p.breakpoints, p.values);
    return BandwidthProfile::blend(p.p_minus, p.p_plus, p.radius, p.kind == "quintic" ? BlendKind::quintic : BlendKind::cubic);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("profile: ") + e.what());
  }
}

SpectralSet build_spectral_set(const ExperimentConfig& c) { return SpectralSet(c.spectral); }

Interval window_of(const ExperimentConfig& c) {
  if (c.window) return *c.window;
  return {-0.8 * c.x_max, 0.8 * c.x_max};
}

ModelPtr build_model(const ExperimentConfig& c) {
  const auto set = build_spectral_set(c);
  const auto profile = build_profile(c);
  if (c.model == "halfline") return make_halfline_model(set.bandwidth(), c.x_max, c.order);
  if (c.model == "schrodinger") {
    if (profile.is_piecewise() && profile.piecewise_data().breakpoints.empty())
      return make_free_model(set, c.x_max, c.order);
    if (profile.is_piecewise()) throw ConfigError("model: 'schrodinger' needs a smooth or constant profile");
    return make_schrodinger_model(Potential::from_profile(profile), set, c.x_max, c.order);
  }
  if (c.profile.type == "constant") {
    if (c.profile.value == 1.0) return make_free_model(set, c.x_max, c.order);
    return make_liouville_model(profile, set, c.x_max, c.order);
  }
  if (c.profile.type == "toy") return make_toy_model(c.profile.p_minus, c.profile.p_plus, set, c.x_max, c.order);
  if (c.profile.type == "piecewise") {
    const auto& pc = profile.piecewise_data();
    if (pc.breakpoints.size() == 1 && pc.breakpoints[0] == 0.0)
      return make_toy_model(pc.values[0], pc.values[1], set, c.x_max, c.order);
    throw ConfigError("profile: piecewise profiles other than a single jump at 0 have no spectral model");
  }
  return make_liouville_model(profile, set, c.x_max, c.order);
}

std::string config_hash(const json& j) {
  // FNV-1a over the canonical dump (keys sorted).
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace varband::cli
