#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <random>

#include "cli.hpp"
#include "varband/acceptance.hpp"
#include "varband/density.hpp"
#include "varband/kernel.hpp"
#include "varband/paleywiener.hpp"
#include "varband/sampling.hpp"
#include "varband/schrodinger.hpp"

namespace varband::cli {

using nlohmann::json;

namespace {

std::ofstream open_csv(const RunContext& ctx, const std::string& name, json& files) {
  const auto p = std::filesystem::path(ctx.out_dir) / name;
  std::ofstream os(p, std::ios::binary);
  if (!os) throw Error("cannot write " + p.string());
  files.push_back(name);
  return os;
}

std::vector<double> grid(const Interval& w, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[i] = n == 1 ? w.a : w.a + (w.b - w.a) * i / (n - 1);
  return xs;
}

KernelModel kernel_model(const ModelPtr& m) {
  const auto& set = m->spectral_set();
  const bool band = set.intervals().size() == 1 && set.intervals()[0].a == 0.0;
  if (auto t = std::dynamic_pointer_cast<const ToySpectralModel>(m); t && band)
    return ToyClosedForm{t->p_minus(), t->p_plus(), set.bandwidth()};
  if (std::dynamic_pointer_cast<const HalfLineSpectralModel>(m) && band) return HalfLineLimit{set.bandwidth()};
  if (auto s = std::dynamic_pointer_cast<const SchrodingerSpectralModel>(m)) return SchrodingerQuadrature{s};
  if (auto l = std::dynamic_pointer_cast<const LiouvilleSpectralModel>(m)) return LiouvillePullback{l};
  return SpectralSum{m};
}

std::vector<double> build_samples(const SampleConfig& s, const BandwidthProfile& profile, double Omega,
                                  const Interval& w, std::mt19937_64& rng) {
  std::vector<double> xs;
  if (s.kind == "lattice") {
    xs = adapted_lattice(profile, s.ratio, Omega, w);
  } else if (s.kind == "mu_lattice") {
    const double za = profile.zeta(w.a), zb = profile.zeta(w.b);
    for (auto j = static_cast<long>(std::ceil(za / s.step)); j * s.step <= zb; ++j) xs.push_back(profile.zeta_inv(j * s.step));
    xs.erase(std::remove_if(xs.begin(), xs.end(), [&](double x) { return !w.contains(x); }), xs.end());
  } else {
    xs = s.points;
    for (double x : xs)
      if (!w.contains(x)) throw ConfigError("samples.points: every point must lie in the window");
  }
  if (s.jitter > 0.0 && xs.size() > 1) {
    std::uniform_real_distribution<double> U(-s.jitter, s.jitter);
    const auto orig = xs;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double l = i > 0 ? orig[i] - orig[i - 1] : orig[i] - w.a;
      const double r = i + 1 < xs.size() ? orig[i + 1] - orig[i] : w.b - orig[i];
      xs[i] = orig[i] + U(rng) * 0.5 * std::min(l, r);
    }
  }
  return xs;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_kernel(const ExperimentConfig& c, const RunContext& ctx, json& res, json& files, std::ostream& log) {
  const auto model = build_model(c);
  const auto km = kernel_model(model);
  const Interval w = window_of(c);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> U(w.a, w.b);
  auto pairs = c.kernel.pairs;
  for (int i = 0; i < c.kernel.random_pairs; ++i) {
    const double x = U(rng), y = U(rng);
    pairs.emplace_back(x, y);
  }
  {
    auto os = open_csv(ctx, "kernel_pairs.csv", files);
    write_kernel_pairs_csv(os, km, pairs);
  }
  if (c.kernel.heatmap_points > 0) {
    const auto xs = grid(w, c.kernel.heatmap_points);
    auto os = open_csv(ctx, "kernel_heatmap.csv", files);
    write_kernel_heatmap_csv(os, km, xs, xs);
  }
  {
    const auto ys = grid(w, c.kernel.diagonal_points);
    std::vector<double> d(ys.size());
    parallel_for(ys.size(), [&](std::size_t i) { d[i] = kernel_diagonal(km, ys[i]); });
    auto os = open_csv(ctx, "kernel_diagonal.csv", files);
    os << "y,k_yy\n";
    char buf[80];
    for (std::size_t i = 0; i < ys.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", ys[i], d[i]);
      os << buf;
    }
  }
  double herm = 0.0;
  for (auto [x, y] : pairs) herm = std::max(herm, std::abs(kernel(km, x, y) - std::conj(kernel(km, y, x))));
  res["hermitian_defect"] = herm;
  res["diagonal_average"] = diagonal_average(km, w);
  res["diagonal_sup"] = diagonal_sup(km, w, static_cast<std::size_t>(c.kernel.diagonal_points));
  res["limit_value"] = model->spectral_set().sqrt_measure() / kPi;
  res["pairs"] = pairs.size();
  log << "kernel: " << pairs.size() << " pairs, diagonal average " << res["diagonal_average"].get<double>() << "\n";
  return 0;
}

Potential scatter_potential(const ExperimentConfig& c) {
  if (c.scatter.potential == "zero") return Potential::zero();
  if (c.scatter.potential == "square_well") return Potential::square_well(c.scatter.depth, c.scatter.radius);
  const auto p = build_profile(c);
  if (p.is_piecewise() && p.piecewise_data().breakpoints.empty()) return Potential::zero();
  if (p.is_piecewise()) throw ConfigError("scatter.potential: 'profile' needs a smooth profile (or use square_well, zero)");
  return Potential::from_profile(p);
}

int cmd_scatter(const ExperimentConfig& c, const RunContext& ctx, json& res, json& files, std::ostream& log) {
  const auto q = scatter_potential(c);
  ScatteringSolver solver(q, c.scatter.omega_max);
  std::vector<ScatteringData> rows(static_cast<std::size_t>(c.scatter.nodes));
  const auto ws = grid({c.scatter.omega_min, c.scatter.omega_max}, c.scatter.nodes);
  parallel_for(rows.size(), [&](std::size_t i) { rows[i] = solver.solve(ws[i]).data(); });
  auto os = open_csv(ctx, "scattering.csv", files);
  write_scattering_csv(os, rows);
  double defect = 0.0, refl = 0.0;
  for (const auto& r : rows) {
    defect = std::max(defect, r.unitarity_defect());
    refl = std::max(refl, std::abs(std::abs(r.R1) - std::abs(r.R2)));
  }
  res["potential"] = q.name();
  res["max_unitarity_defect"] = defect;
  res["max_reflection_asymmetry"] = refl;
  log << "scatter: " << rows.size() << " nodes, max unitarity defect " << defect << "\n";
  return 0;
}

int cmd_reconstruct(const ExperimentConfig& c, const RunContext& ctx, json& res, json& files, std::ostream& log) {
  const auto model = build_model(c);
  const auto profile = build_profile(c);
  const Interval w = window_of(c);
  std::mt19937_64 rng(c.seed);
  const auto f = random_function(model, rng, c.reconstruct.taper);
  const auto xs = build_samples(c.reconstruct.samples, profile, model->spectral_set().bandwidth(), w, rng);
  if (xs.size() < 2) throw ConfigError("reconstruct.samples: fewer than two points in the window");
  const SampleSet X(xs, f.values(xs));
  ReconstructOptions o;
  o.n_max = c.reconstruct.n_max;
  o.tol = c.reconstruct.tol;
  o.window = w;
  o.divergence_run = c.reconstruct.divergence_run;
  const auto rec = reconstruct_iterative(model, profile, X, o, &f);
  const auto& rep = rec.report;
  {
    auto os = open_csv(ctx, "reconstruct_iterations.csv", files);
    os << "n,residual,certificate,error,certificate_true_norm\n";
    char buf[160];
    for (std::size_t n = 0; n < rep.residual.size(); ++n) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", n, rep.residual[n], rep.certificate[n],
                    rep.error[n], rep.certificate_true_norm[n]);
      os << buf;
    }
  }
  {
    const auto g = grid(w, c.reconstruct.grid_points);
    const auto a = f.values(g), b = rec.f.values(g);
    auto os = open_csv(ctx, "reconstruct_function.csv", files);
    os << "x,re_f,im_f,re_fn,im_fn\n";
    char buf[160];
    for (std::size_t i = 0; i < g.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", g[i], a[i].real(), a[i].imag(), b[i].real(),
                    b[i].imag());
      os << buf;
    }
  }
  res["samples"] = xs.size();
  res["delta"] = rep.delta;
  res["ratio"] = rep.ratio;
  res["certified"] = rep.certified;
  res["warning"] = rep.warning;
  res["iterations"] = rep.iterations;
  res["converged"] = rep.converged;
  res["diverged"] = rep.diverged;
  res["diagnosis"] = rep.diagnosis;
  res["f0_norm"] = rep.f0_norm;
  res["norm_estimate"] = rep.norm_estimate;
  res["true_norm"] = f.norm();
  res["clipped_length"] = rep.clipped_length;
  res["final_error"] = rep.error.back();
  res["final_certificate"] = rep.certificate.back();
  bool dominated = true;
  for (std::size_t n = 0; n < rep.error.size(); ++n) dominated = dominated && rep.error[n] <= rep.certificate_true_norm[n];
  res["bound_dominates_error"] = dominated;
  if (!rep.warning.empty()) log << "warning: " << rep.warning << "\n";
  log << "reconstruct: " << xs.size() << " samples, ratio " << rep.ratio << ", " << rep.iterations
      << " iterations, final error " << rep.error.back() << "\n";
  return 0;
}

void toy_parameters(const ExperimentConfig& c, double& pm, double& pp) {
  const auto p = build_profile(c);
  if (!p.is_piecewise()) throw ConfigError("profile: shannon needs a constant or toy profile");
  const auto& pc = p.piecewise_data();
  if (pc.breakpoints.empty()) {
    pm = pp = pc.values[0];
  } else if (pc.breakpoints.size() == 1 && pc.breakpoints[0] == 0.0) {
    pm = pc.values[0];
    pp = pc.values[1];
  } else {
    throw ConfigError("profile: shannon needs a constant or toy profile");
  }
  if (c.spectral.size() != 1 || c.spectral[0].a != 0.0) throw ConfigError("spectral_set: shannon needs a band [0, Omega]");
}

int cmd_shannon(const ExperimentConfig& c, const RunContext& ctx, json& res, json& files, std::ostream& log) {
  double pm = 1.0, pp = 1.0;
  toy_parameters(c, pm, pp);
  const double Omega = c.spectral[0].b;
  const auto G = shannon_gram(pm, pp, Omega, c.shannon.J);
  double off = 0.0, diag = 0.0;
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t k = 0; k < G.size(); ++k)
      (i == k ? diag : off) = std::max(i == k ? diag : off, std::abs(G[i][k] - (i == k ? 1.0 : 0.0)));
  const auto nodes = shannon_basis_toy(pm, pp, Omega, c.shannon.J);
  {
    auto os = open_csv(ctx, "shannon_nodes.csv", files);
    os << "j,x_j,w_j\n";
    char buf[96];
    for (std::size_t i = 0; i < nodes.nodes.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", nodes.index[i], nodes.nodes[i], nodes.weights[i]);
      os << buf;
    }
  }
  const auto model = make_toy_model(pm, pp, build_spectral_set(c), c.x_max, c.order);
  const auto g = shannon_basis_toy(pm, pp, Omega, c.shannon.expansion_J);
  const Interval w = window_of(c);
  std::mt19937_64 rng(c.seed);
  json errors = json::array();
  for (int t = 0; t < c.shannon.functions; ++t) {
    const auto f = random_function(model, rng);
    const auto s = f.values(g.nodes);
    auto expansion = [&](double x) { return shannon_expansion(g, s, pm, pp, Omega, x); };
    errors.push_back(spatial_distance([&](double x) { return f(x); }, expansion, *model, w) / f.norm());
    if (t == 0) {
      const auto xs = grid(w, c.shannon.eval_points);
      const auto fv = f.values(xs);
      auto os = open_csv(ctx, "shannon_expansion.csv", files);
      os << "x,re_f,im_f,re_s,im_s\n";
      char buf[160];
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const cplx e = expansion(xs[i]);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", xs[i], fv[i].real(), fv[i].imag(), e.real(),
                      e.imag());
        os << buf;
      }
    }
  }
  res["gram_max_offdiagonal"] = off;
  res["gram_max_diagonal_defect"] = diag;
  res["J"] = c.shannon.J;
  res["expansion_J"] = c.shannon.expansion_J;
  res["relative_l2_errors"] = errors;
  log << "shannon: Gram max off-diagonal " << off << ", max diagonal defect " << diag << "\n";
  return 0;
}

int cmd_density(const ExperimentConfig& c, const RunContext& ctx, json& res, json& files, std::ostream& log) {
  const auto profile = build_profile(c);
  const Interval w = window_of(c);
  std::mt19937_64 rng(c.seed);
  const double Omega = build_spectral_set(c).bandwidth();
  const auto xs = build_samples(c.density.samples, profile, Omega, w, rng);
  auto r = c.density.r;
  const double mu = profile.mu(w.a, w.b);
  if (r.empty()) r = {mu / 32, mu / 16, mu / 8, mu / 4};
  DensityOptions o;
  o.step_fraction = c.density.step_fraction;
  const SampleSet X(xs);
  const auto rep = beurling_density(profile, X, r, w, o);
  auto os = open_csv(ctx, "density.csv", files);
  write_density_csv(os, rep);
  res["label"] = rep.label;
  res["samples"] = xs.size();
  res["D_minus"] = rep.D_minus;
  res["D_plus"] = rep.D_plus;
  res["r_max"] = rep.r.back();
  res["monotone_trend"] = rep.monotone_trend;
  if (xs.size() >= 2) {
    const auto s = separation(profile, X);
    res["separation"] = {{"min_gap", s.min_gap}, {"n0", s.n0}, {"separated", s.separated}};
    const auto g = gap_density_bound(profile, X, w);
    res["gap_bound"] = {{"eta", g.eta}, {"bound", g.bound}, {"measured", g.measured}, {"holds", g.holds}};
  }
  log << "density (finite-window estimates): D- " << rep.D_minus << ", D+ " << rep.D_plus << " at r = " << rep.r.back()
      << "\n";
  return 0;
}

int cmd_landau(const ExperimentConfig& c, const RunContext& ctx, json& res, json& files, std::ostream& log) {
  const auto model = build_model(c);
  const auto profile = build_profile(c);
  const double crit = model->spectral_set().sqrt_measure() / kPi;
  std::vector<double> ds;
  for (double d : c.landau.densities) ds.push_back(d * crit);
  LandauOptions o;
  o.stable_fraction = c.landau.stable_fraction;
  const auto t = landau_sweep(*model, profile, ds, c.landau.half_widths, o);
  auto os = open_csv(ctx, "landau.csv", files);
  write_landau_csv(os, t);
  res["label"] = t.label;
  res["critical"] = t.critical;
  res["last_degenerating"] = t.last_degenerating ? json(*t.last_degenerating) : json();
  res["first_stable"] = t.first_stable ? json(*t.first_stable) : json();
  res["brackets_critical"] = t.last_degenerating && t.first_stable && *t.last_degenerating < crit &&
                             *t.first_stable >= crit * (1 - 1e-12);
  json stable = json::array();
  for (std::size_t i = 0; i < t.densities.size(); ++i) stable.push_back({{"density", t.densities[i]}, {"stable", bool(t.stable[i])}});
  res["stability"] = stable;
  log << "landau: critical " << crit << ", bracket [" << (t.last_degenerating ? *t.last_degenerating : NAN) << ", "
      << (t.first_stable ? *t.first_stable : NAN) << "]\n";
  return 0;
}

struct Check {
  std::string name;
  bool pass;
  double value;
  double tolerance;
};

std::vector<Check> invariants(const ExperimentConfig& c) {
  const double s = c.tolerance_scale;
  const auto model = build_model(c);
  const auto km = kernel_model(model);
  const auto profile = build_profile(c);
  const Interval w = window_of(c);
  const double Omega = model->spectral_set().bandwidth();
  const bool halfline = model->kind() == "halfline";
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> U(w.a, w.b);
  std::vector<Check> out;

  double herm = 0.0, rep = 0.0, sinc = 0.0;
  const bool free = model->kind() == "free" && c.spectral.size() == 1 && c.spectral[0].a == 0.0;
  for (int i = 0; i < 200; ++i) {
    const double x = U(rng), y = U(rng);
    const cplx k = kernel(km, x, y);
    herm = std::max(herm, std::abs(k - std::conj(kernel(km, y, x))));
    if (i < 50) rep = std::max(rep, std::abs(k - spectral_sum_kernel(*model, x, y)));
    if (free) {
      const double t = std::sqrt(Omega) * (x - y);
      sinc = std::max(sinc, std::abs(k - std::sqrt(Omega) / kPi * (t == 0.0 ? 1.0 : std::sin(t) / t)));
    }
  }
  out.push_back({"hermitian symmetry", herm < 1e-10 * s, herm, 1e-10 * s});
  out.push_back({"kernel agrees with the direct spectral sum", rep < 1e-6 * s, rep, 1e-6 * s});
  if (free) out.push_back({"free kernel equals the sinc kernel", sinc < 1e-7 * s, sinc, 1e-7 * s});

  std::vector<double> pts(30);
  for (auto& x : pts) x = U(rng);
  const auto G = kernel_gram(km, pts);
  Eigen::MatrixXcd M(30, 30);
  for (int i = 0; i < 30; ++i)
    for (int k = 0; k < 30; ++k) M(i, k) = G[i][k];
  const Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
  const double trace = H.trace().real();
  const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(H).eigenvalues()(0);
  out.push_back({"Gram matrix is positive semidefinite", lmin >= -1e-8 * trace * s, lmin, -1e-8 * trace * s});

  double bern = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto f = random_function(model, rng);
    for (int k = 1; k <= 4; ++k) bern = std::max(bern, bernstein_ratio(f, k, Omega));
  }
  out.push_back({"Bernstein ratio at most 1", bern <= 1.0 + 1e-9 * s, bern, 1.0 + 1e-9 * s});

  if (!halfline) {
    const auto xs = adapted_lattice(profile, 0.6, Omega, w);
    const auto f = random_function(model, rng, 6);
    ReconstructOptions o;
    o.n_max = 6;
    o.tol = 0.0;
    o.window = w;
    const auto rec = reconstruct_iterative(model, profile, SampleSet(xs, f.values(xs)), o, &f);
    double worst = 0.0;
    for (std::size_t n = 0; n < rec.report.error.size(); ++n)
      worst = std::max(worst, rec.report.error[n] / rec.report.certificate_true_norm[n]);
    out.push_back({"reconstruction error below the certificate (ratio 0.6, n <= 6)", worst <= s, worst, s});

    const auto b = sampling_bounds(rec.report.delta, Omega);
    const auto cells = midpoint_partition(SampleSet(xs), w);
    double lo = 1e300, hi = 0.0;
    for (int t = 0; t < 10; ++t) {
      const auto g = random_function(model, rng, 6);
      const double e = weighted_sample_energy(cells, g.values(xs)) / (g.norm() * g.norm());
      lo = std::min(lo, e / b.A);
      hi = std::max(hi, e / b.B);
    }
    out.push_back({"weighted sample energy above A ||f||^2 (1% window slack)", lo >= 1.0 - 1e-2 * s, lo, 1.0 - 1e-2 * s});
    out.push_back({"weighted sample energy below B ||f||^2 (1% window slack)", hi <= 1.0 + 1e-2 * s, hi, 1.0 + 1e-2 * s});
  }

  std::vector<double> xs;
  for (int i = 0; i < 200; ++i) xs.push_back(U(rng));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> ys;
  for (double x : xs) ys.push_back(profile.zeta(x));
  const double mu = profile.mu(w.a, w.b);
  const std::vector<double> rs{mu / 16, mu / 8, mu / 4};
  const auto A = beurling_density(profile, SampleSet(xs), rs, w);
  const auto B = beurling_density(BandwidthProfile::constant(1.0), SampleSet(ys), rs, {profile.zeta(w.a), profile.zeta(w.b)});
  double eq = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) eq = std::max({eq, std::abs(A.lower[i] - B.lower[i]), std::abs(A.upper[i] - B.upper[i])});
  out.push_back({"density warp equivariance", eq <= 1e-10 * s, eq, 1e-10 * s});
  return out;
}

int cmd_selftest(const ExperimentConfig& c, const std::vector<int>& cases, const RunContext& ctx, json& res, json& files,
                 std::ostream& log) {
  int failures = 0;
  json checks = json::array();
  auto os = open_csv(ctx, "selftest.csv", files);
  os << "name,pass,value,tolerance\n";
  char buf[256];
  if (c.selftest.invariants) {
    for (const auto& ch : invariants(c)) {
      if (!ch.pass) ++failures;
      log << (ch.pass ? "PASS " : "FAIL ") << ch.name << ": " << ch.value << " (limit " << ch.tolerance << ")\n";
      std::snprintf(buf, sizeof buf, "\"%s\",%d,%.17g,%.17g\n", ch.name.c_str(), ch.pass ? 1 : 0, ch.value, ch.tolerance);
      os << buf;
      checks.push_back({{"name", ch.name}, {"pass", ch.pass}, {"value", ch.value}, {"tolerance", ch.tolerance}});
    }
  }
  AcceptanceOptions ao;
  ao.seed = c.seed;
  ao.tolerance_scale = c.tolerance_scale;
  for (int id : cases) {
    const auto r = run_criterion(id, ao);
    if (!r.pass) ++failures;
    log << format_result(r) << "\n";
    std::snprintf(buf, sizeof buf, "\"criterion %d %s\",%d,,\n", r.id, r.name.c_str(), r.pass ? 1 : 0);
    os << buf;
    checks.push_back({{"name", "criterion " + std::to_string(r.id) + " " + r.name}, {"pass", r.pass}, {"detail", r.detail},
                      {"seconds", r.seconds}});
  }
  res["checks"] = checks;
  res["failures"] = failures;
  log << "selftest: " << failures << " failure(s)\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int run(const std::string& sub, const ExperimentConfig& c, const RunContext& ctx, std::ostream& log) {
  return run(sub, c, {}, ctx, log);
}

int run(const std::string& sub, const ExperimentConfig& c, const std::vector<int>& cases, const RunContext& ctx,
        std::ostream& log) {
  std::filesystem::create_directories(ctx.out_dir);
  set_thread_count(c.threads);
  json report, res = json::object(), files = json::array();
  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  if (sub == "kernel") code = cmd_kernel(c, ctx, res, files, log);
  else if (sub == "scatter") code = cmd_scatter(c, ctx, res, files, log);
  else if (sub == "reconstruct") code = cmd_reconstruct(c, ctx, res, files, log);
  else if (sub == "shannon") code = cmd_shannon(c, ctx, res, files, log);
  else if (sub == "density") code = cmd_density(c, ctx, res, files, log);
  else if (sub == "landau") code = cmd_landau(c, ctx, res, files, log);
  else if (sub == "selftest") {
    std::vector<int> all = c.selftest.criteria;
    all.insert(all.end(), cases.begin(), cases.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    code = cmd_selftest(c, all, ctx, res, files, log);
  } else {
    throw ConfigError("unknown subcommand " + sub);
  }
  report["subcommand"] = sub;
  report["version"] = ctx.version;
  report["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION);
  report["config"] = c.raw;
  report["config_hash"] = config_hash(c.raw);
  report["seed"] = c.seed;
  report["tolerance_scale"] = c.tolerance_scale;
  report["threads"] = thread_count();
  report["timings"] = {{"total_seconds", seconds_since(t0)}};
  report["results"] = res;
  report["files"] = files;
  report["exit_code"] = code;
  const auto p = std::filesystem::path(ctx.out_dir) / (sub + "_report.json");
  std::ofstream os(p);
  if (!os) throw Error("cannot write " + p.string());
  os << report.dump(2) << "\n";
  return code;
}

}  // namespace varband::cli
