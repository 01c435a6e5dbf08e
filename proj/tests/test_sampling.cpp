#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "varband/error.hpp"
#include "varband/sampling.hpp"

using namespace varband;

namespace {

std::vector<double> lattice(double step, double L, double offset = 0.0) {
  std::vector<double> xs;
  for (int j = static_cast<int>(std::ceil((-L - offset) / step)); offset + j * step <= L; ++j) xs.push_back(offset + j * step);
  return xs;
}

// Toy-adapted lattice: gaps delta sqrt(p-) left of 0 and delta sqrt(p+) right of it.
std::vector<double> toy_lattice(double delta, double pm, double pp, double L) {
  std::vector<double> xs;
  for (double x = -delta * std::sqrt(pm) * std::floor(L / (delta * std::sqrt(pm))); x < 0.0; x += delta * std::sqrt(pm))
    xs.push_back(x);
  for (double x = 0.0; x <= L; x += delta * std::sqrt(pp)) xs.push_back(x);
  return xs;
}

}  // namespace

TEST_CASE("gap condition") {
  const auto one = BandwidthProfile::constant(1.0);
  auto g = gap_condition(one, SampleSet(lattice(kPi / 2, 20.0)), 1.0);
  CHECK(g.delta == doctest::Approx(kPi / 2));
  CHECK(g.pass);
  g = gap_condition(one, SampleSet(lattice(kPi, 20.0)), 4.0);
  CHECK(g.delta == doctest::Approx(kPi));
  CHECK(g.threshold == doctest::Approx(kPi / 2));
  CHECK_FALSE(g.pass);
  // Right gaps twice the left ones carry the same delta when p+ = 4 p-.
  const auto toy = BandwidthProfile::toy(1.0, 4.0);
  const auto xs = toy_lattice(1.0, 1.0, 4.0, 10.0);
  CHECK(gap_condition(toy, SampleSet(xs), 1.0).delta == doctest::Approx(1.0));
  CHECK_THROWS_AS(gap_condition(one, SampleSet({1.0}), 1.0), InvalidArgument);
}

TEST_CASE("sampling bounds") {
  auto b = sampling_bounds(0.0, 3.0);
  CHECK(b.A == 1.0);
  CHECK(b.B == 1.0);
  b = sampling_bounds(kPi / 2, 1.0);
  CHECK(b.A == doctest::Approx(0.25));
  CHECK(b.B == doctest::Approx(2.25));
}

TEST_CASE("partition helpers") {
  const SampleSet X({-1.0, 0.0, 2.0});
  const auto c = midpoint_partition(X, {-3.0, 3.0});
  CHECK(c == std::vector<double>{-3.0, -0.5, 1.0, 3.0});
  const auto w = natural_window(X);
  CHECK(w.a == -1.5);
  CHECK(w.b == 3.0);
  CHECK(weighted_sample_energy(c, {1.0, 2.0, 0.0}) == doctest::Approx(2.5 + 4 * 1.5));
  CHECK_THROWS_AS(midpoint_partition(X, {-0.5, 3.0}), InvalidArgument);
}

TEST_CASE("weighted sample sums lie between the sampling bounds") {
  const double L = 80.0;
  const auto blend = BandwidthProfile::blend(1.0, 4.0, 1.0);
  struct Case {
    ModelPtr model;
    BandwidthProfile profile;
  };
  const std::vector<Case> cases{{make_free_model(SpectralSet::band(1.0), L), BandwidthProfile::constant(1.0)},
                                {make_toy_model(1.0, 4.0, SpectralSet::band(1.0), L), BandwidthProfile::toy(1.0, 4.0)},
                                {make_liouville_model(blend, SpectralSet::band(1.0), L), blend}};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> jitter(-0.4, 0.4);
  for (const auto& c : cases) {
    CAPTURE(c.model->kind());
    std::vector<double> xs;
    for (double x = -L + 1.0; x < L - 1.0; x += 1.5 + jitter(rng)) xs.push_back(x);
    const SampleSet X(xs);
    const auto gap = gap_condition(c.profile, X, 1.0);
    REQUIRE(gap.pass);
    const auto bounds = sampling_bounds(gap.delta, 1.0);
    const auto cells = midpoint_partition(X, {-L, L});
    for (int t = 0; t < 100; ++t) {
      const auto f = random_function(c.model, rng, 6);
      const double e = weighted_sample_energy(cells, f.values(xs));
      const double n2 = f.norm() * f.norm();
      CHECK(e >= bounds.A * n2 - 1e-6);
      CHECK(e <= bounds.B * n2 + 1e-6);
    }
  }
}

TEST_CASE("fundamental inequality and contraction of I - R") {
  const double L = 60.0;
  const auto blend = BandwidthProfile::blend(1.0, 3.0, 1.0);
  const auto model = make_liouville_model(blend, SpectralSet::band(1.0), L + 10);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(0.8, 1.8);
  std::vector<double> xs;
  for (double x = -L + 0.5; x < L - 0.5; x += U(rng)) xs.push_back(x);
  const SampleSet X(xs);
  const auto gap = gap_condition(blend, X, 1.0);
  REQUIRE(gap.pass);
  for (int t = 0; t < 50; ++t) {
    const auto f = random_function(model, rng, 6);
    CHECK(step_approximation_error(f, X, {-L, L}) <= gap.ratio * f.norm() + 1e-3);
  }
  const StepOperator R(model, X, {-L, L});
  for (int t = 0; t < 20; ++t) {
    const auto h = random_function(model, rng, 6);
    auto d = h.coefficients();
    const auto Rh = R.apply(d);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= Rh[i];
    CHECK(synthesize(model, d).norm() <= (gap.ratio + 1e-3) * h.norm());
  }
}

TEST_CASE("reconstruction: zero data") {
  const auto model = make_free_model(SpectralSet::band(1.0), 30.0);
  const auto xs = lattice(2.0, 20.0);
  const SampleSet X(xs, std::vector<cplx>(xs.size(), 0.0));
  const auto rec = reconstruct_iterative(model, BandwidthProfile::constant(1.0), X);
  CHECK(rec.f.norm() == 0.0);
  CHECK(rec.report.converged);
  for (double r : rec.report.residual) CHECK(r == 0.0);
  CHECK_THROWS_AS(reconstruct_iterative(model, BandwidthProfile::constant(1.0), SampleSet(xs)), InvalidArgument);
}

TEST_CASE("reconstruction: certificate dominates the error") {
  const double L = 150.0;
  const auto model = make_free_model(SpectralSet::band(1.0), L + 20);
  std::mt19937_64 rng(13);
  const auto f = random_function(model, rng, 16);
  const auto xs = lattice(0.9 * kPi, L);
  const SampleSet X(xs, f.values(xs));
  ReconstructOptions opts;
  opts.window = Interval{-L, L};
  opts.tol = 1e-12;
  const auto rec = reconstruct_iterative(model, BandwidthProfile::constant(1.0), X, opts, &f);
  const auto& rep = rec.report;
  CHECK(rep.certified);
  CHECK(rep.ratio == doctest::Approx(0.9));
  for (std::size_t n = 0; n < rep.error.size(); ++n) {
    CAPTURE(n);
    // (0.9)^{n+1} (1.9 pi)/(0.1 pi) ||f||
    CHECK(rep.certificate_true_norm[n] == doctest::Approx(std::pow(0.9, n + 1) * 19.0 * f.norm()));
    CHECK(rep.error[n] <= rep.certificate_true_norm[n]);
    CHECK(rep.error[n] <= rep.certificate[n]);
    if (n > 0) CHECK(rep.certificate[n] < rep.certificate[n - 1]);
  }
  CHECK(rep.norm_estimate >= f.norm() * (1 - 1e-9));
  CHECK(rep.error.back() < 1e-12);
  CHECK((rec.f - f).norm() == doctest::Approx(rep.error.back()));
}

TEST_CASE("reconstruction on the toy Shannon grid") {
  const double pm = 1.0, pp = 4.0, Omega = 1.0, L = 300.0;
  const auto model = make_toy_model(pm, pp, SpectralSet::band(Omega), L + 20);
  std::mt19937_64 rng(14);
  const auto f = random_function(model, rng, 16);
  const auto grid = shannon_basis_toy(pm, pp, Omega, 95);
  std::vector<double> xs;
  for (double x : grid.nodes)
    if (std::abs(x) <= L) xs.push_back(x);
  const SampleSet X(xs, f.values(xs));
  ReconstructOptions opts;
  opts.n_max = 60;
  opts.window = Interval{-L, L};
  const auto rec = reconstruct_iterative(model, BandwidthProfile::toy(pm, pp), X, opts, &f);
  CHECK_FALSE(rec.report.certified);
  CHECK_FALSE(rec.report.warning.empty());
  CHECK(rec.report.iterations <= 60);
  CHECK(rec.report.error.back() < 1e-6);
}

TEST_CASE("reconstruction flags divergence on sparse sets") {
  const auto model = make_free_model(SpectralSet::band(4.0), 40.0);
  std::mt19937_64 rng(15);
  const auto f = random_function(model, rng, 6);
  const auto xs = lattice(3.0 * kPi, 30.0, 0.3);
  const SampleSet X(xs, f.values(xs));
  ReconstructOptions opts;
  opts.n_max = 200;
  opts.window = Interval{-40.0, 40.0};
  const auto rec = reconstruct_iterative(model, BandwidthProfile::constant(1.0), X, opts);
  CHECK_FALSE(rec.report.certified);
  CHECK_FALSE(rec.report.converged);
  CHECK((rec.report.diverged || rec.report.diagnosis == "stopped at n_max"));
}

TEST_CASE("Shannon-like orthonormal basis") {
  for (auto [pm, pp] : {std::pair{1.0, 1.0}, {1.0, 4.0}, {4.0, 1.0}, {2.0, 3.0}}) {
    for (double Omega : {1.0, 2.5}) {
      const auto G = shannon_gram(pm, pp, Omega, 20);
      double worst = 0.0;
      for (std::size_t i = 0; i < G.size(); ++i)
        for (std::size_t k = 0; k < G.size(); ++k) worst = std::max(worst, std::abs(G[i][k] - (i == k ? 1.0 : 0.0)));
      CHECK(worst < 1e-8);
    }
  }
  const auto g = shannon_basis_toy(1.0, 1.0, 1.0, 3);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    CHECK(g.nodes[i] == doctest::Approx(kPi * g.index[i]));
    CHECK(g.weights[i] == 1.0);
  }
  const auto h = shannon_basis_toy(1.0, 4.0, 1.0, 2);
  CHECK(h.nodes == std::vector<double>{-2 * kPi, -kPi, 0.0, 2 * kPi, 4 * kPi});
  CHECK(h.weights == std::vector<double>{1.0, 1.0, 1.5, 2.0, 2.0});
}

TEST_CASE("Shannon expansion reconstructs synthesized toy functions") {
  const double pm = 1.0, pp = 4.0, Omega = 1.0;
  const auto model = make_toy_model(pm, pp, SpectralSet::band(Omega), 150.0);
  const auto grid = shannon_basis_toy(pm, pp, Omega, 200);
  std::mt19937_64 rng(16);
  for (int t = 0; t < 3; ++t) {
    const auto f = random_function(model, rng);
    const auto samples = f.values(grid.nodes);
    const double err = spatial_distance([&](double x) { return f(x); },
                                        [&](double x) { return shannon_expansion(grid, samples, pm, pp, Omega, x); },
                                        *model, {-100.0, 100.0});
    CHECK(err < 1e-5 * f.norm());
    for (std::size_t j = 190; j < 210; ++j)
      CHECK(std::abs(shannon_expansion(grid, samples, pm, pp, Omega, grid.nodes[j]) - samples[j]) < 1e-12);
  }
}

TEST_CASE("half-line sampling formula") {
  const double Omega = 2.0, so = std::sqrt(Omega);
  const auto model = make_halfline_model(Omega, 700.0);
  std::mt19937_64 rng(17);
  for (int t = 0; t < 3; ++t) {
    const auto f = random_function(model, rng);
    std::vector<double> samples;
    for (int j = 1; j <= 200; ++j) samples.push_back(f(kPi * j / so).real());
    CHECK(halfline_expansion(Omega, samples, 0.0).value == 0.0);
    CHECK(halfline_expansion(Omega, samples, -1.0).value == 0.0);
    CHECK(halfline_expansion(Omega, samples, 3 * kPi / so).value == samples[2]);
    double worst = 0.0;
    for (double x = 0.0; x <= 10.0 / so; x += 0.01) worst = std::max(worst, std::abs(halfline_expansion(Omega, samples, x).value - f(x).real()));
    CHECK(worst < 1e-3);
    CHECK(halfline_expansion(Omega, samples, 1.0).terms == 200);
  }
}

TEST_CASE("frame bound estimates") {
  const auto free = make_free_model(SpectralSet::band(1.0), 10.0);
  const Interval w{-60.0, 60.0};
  const SampleSet grid(lattice(kPi, 60.0, 0.5));
  auto shannon = frame_bounds_estimate(*free, grid, natural_window(grid));
  CHECK(shannon.A_est > 0.0);
  CHECK((shannon.B_est - shannon.A_est) / shannon.B_est < 0.05);
  CHECK(shannon.A_est == doctest::Approx(1.0 / kPi).epsilon(0.05));
  // Below the critical density the lower bound collapses as the window grows.
  double prev = 1e300;
  for (double L : {30.0, 60.0, 120.0}) {
    const auto e = frame_bounds_estimate(*free, SampleSet(lattice(1.3 * kPi, L - 1.0, 0.5)), {-L, L});
    CHECK(e.A_est <= prev);
    prev = e.A_est;
  }
  CHECK(prev < 1e-6);
  // A long hole in an oversampled set.
  std::vector<double> holed;
  for (double x : lattice(kPi / 2, 59.0, 0.2))
    if (std::abs(x) > 25.0) holed.push_back(x);
  const auto h = frame_bounds_estimate(*free, SampleSet(holed), w);
  CHECK(h.A_est < 0.1 * h.B_est);
  CHECK_THROWS_AS(frame_bounds_estimate(*free, SampleSet(), w), InvalidArgument);
}

TEST_CASE("adapted lattices meet the requested gap ratio") {
  const auto toy = BandwidthProfile::toy(1.0, 4.0);
  const auto xs = adapted_lattice(toy, 0.5, 1.0, {-10.0, 10.0});
  CHECK(xs == toy_lattice(0.5 * kPi, 1.0, 4.0, 10.0));
  for (const auto& p : {BandwidthProfile::blend(1.0, 4.0, 2.0), BandwidthProfile::blend(3.0, 0.5, 1.0, BlendKind::quintic),
                        BandwidthProfile::piecewise({-1.0, 2.0}, {1.0, 0.25, 2.0})}) {
    for (double ratio : {0.3, 0.9}) {
      const auto X = adapted_lattice(p, ratio, 2.0, {-20.0, 15.0});
      CHECK(X.front() >= -20.0);
      CHECK(X.back() <= 15.0);
      CHECK(std::find(X.begin(), X.end(), 0.0) != X.end());
      const auto g = gap_condition(p, SampleSet(X), 2.0);
      CHECK(g.ratio <= ratio * (1 + 1e-9));
      CHECK(g.ratio >= 0.9 * ratio);
    }
  }
  CHECK(adapted_lattice(BandwidthProfile::constant(1.0), 1.0, 1.0, {2.0, 10.0}).front() < 6.0);
}
