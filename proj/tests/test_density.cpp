#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "varband/density.hpp"
#include "varband/error.hpp"

using namespace varband;

namespace {

std::vector<double> lattice(double step, double L) {
  std::vector<double> xs;
  for (int j = static_cast<int>(std::ceil(-L / step)); j * step <= L; ++j) xs.push_back(j * step);
  return xs;
}

}  // namespace

TEST_CASE("Beurling density of lattices") {
  const auto one = BandwidthProfile::constant(1.0);
  const std::vector<double> rs{5.0, 10.0, 20.0, 40.0};
  for (double delta : {0.5, 1.0, kPi}) {
    const auto rep = beurling_density(one, SampleSet(lattice(delta, 200.0)), rs, {-200.0, 200.0});
    REQUIRE(rep.r.size() == rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
      CHECK(rep.lower[i] <= rep.upper[i]);
      CHECK(std::abs(rep.lower[i] - 1.0 / delta) <= 2.0 / rs[i]);
      CHECK(std::abs(rep.upper[i] - 1.0 / delta) <= 2.0 / rs[i]);
    }
    CHECK(rep.D_minus == rep.lower.back());
    CHECK(rep.label == "finite-window estimates");
  }
  // Z on the left and 2Z on the right both have mu_p-density 1 under p+ = 4.
  const auto toy = BandwidthProfile::toy(1.0, 4.0);
  std::vector<double> xs;
  for (int j = -200; j < 0; ++j) xs.push_back(j);
  for (int j = 0; j <= 200; j += 2) xs.push_back(j);
  const auto rep = beurling_density(toy, SampleSet(xs), rs, {-200.0, 200.0});
  for (std::size_t i = 0; i < rs.size(); ++i) {
    CHECK(std::abs(rep.lower[i] - 1.0) <= 2.0 / rs[i]);
    CHECK(std::abs(rep.upper[i] - 1.0) <= 2.0 / rs[i]);
  }
  const auto empty = beurling_density(one, SampleSet(), rs, {-200.0, 200.0});
  CHECK(empty.D_minus == 0.0);
  CHECK(empty.D_plus == 0.0);
  CHECK_THROWS_AS(beurling_density(one, SampleSet(), {30.0}, {-50.0, 50.0}), InvalidArgument);
  CHECK_THROWS_AS(beurling_density(one, SampleSet({-60.0}), {5.0}, {-50.0, 50.0}), InvalidArgument);
}

TEST_CASE("warp equivariance and monotonicity") {
  const auto blend = BandwidthProfile::blend(1.0, 4.0, 3.0);
  const auto one = BandwidthProfile::constant(1.0);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(-100.0, 100.0);
  for (int t = 0; t < 5; ++t) {
    std::vector<double> xs(300);
    for (auto& x : xs) x = U(rng);
    std::sort(xs.begin(), xs.end());
    const SampleSet X(xs);
    std::vector<double> ys;
    for (double x : xs) ys.push_back(blend.zeta(x));
    const Interval w{-100.0, 100.0};
    const std::vector<double> rs{4.0, 8.0, 16.0};
    const auto a = beurling_density(blend, X, rs, w);
    const auto b = beurling_density(one, SampleSet(ys), rs, {blend.zeta(w.a), blend.zeta(w.b)});
    for (std::size_t i = 0; i < rs.size(); ++i) {
      CHECK(std::abs(a.lower[i] - b.lower[i]) < 1e-10);
      CHECK(std::abs(a.upper[i] - b.upper[i]) < 1e-10);
    }
    // Adding points never lowers either count.
    auto more = xs;
    for (int k = 0; k < 50; ++k) more.push_back(U(rng));
    std::sort(more.begin(), more.end());
    more.erase(std::unique(more.begin(), more.end()), more.end());
    const auto c = beurling_density(blend, SampleSet(more), rs, w);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      CHECK(c.inf_count[i] >= a.inf_count[i]);
      CHECK(c.sup_count[i] >= a.sup_count[i]);
    }
  }
}

TEST_CASE("separation") {
  const auto one = BandwidthProfile::constant(1.0);
  auto s = separation(one, SampleSet(lattice(kPi, 30.0)));
  CHECK(s.min_gap == doctest::Approx(kPi));
  CHECK(s.n0 == 1);
  CHECK(s.separated);
  s = separation(one, SampleSet({0.0, 1.0, 1.0 + 1e-9, 3.0}));
  CHECK(s.min_gap == doctest::Approx(1e-9).epsilon(1e-6));
  CHECK(s.argmin == 1);
  CHECK(s.n0 == 2);
  CHECK_FALSE(s.separated);
  const auto toy = BandwidthProfile::toy(1.0, 4.0);
  s = separation(toy, SampleSet({-3.0, -0.4, 1.0, 5.0}));
  // mu over [-0.4, 1] = 0.4 + 1 / 2
  CHECK(s.min_gap == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(s.argmin == 1);
  CHECK_THROWS_AS(separation(one, SampleSet({1.0})), InvalidArgument);
}

TEST_CASE("gap density bound") {
  const auto one = BandwidthProfile::constant(1.0);
  auto g = gap_density_bound(one, SampleSet(lattice(1.0, 200.0)));
  CHECK(g.eta == doctest::Approx(1.0));
  CHECK(g.bound == doctest::Approx(1.0));
  CHECK(g.measured == doctest::Approx(1.0).epsilon(0.02));
  CHECK(g.holds);
  g = gap_density_bound(one, SampleSet(lattice(2.0, 200.0)));
  CHECK(g.eta == doctest::Approx(2.0));
  CHECK(g.bound == doctest::Approx(0.5));
  CHECK(g.measured == doctest::Approx(0.5).epsilon(0.02));
  CHECK(g.holds);
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> J(-0.45, 0.45);
  const auto blend = BandwidthProfile::blend(2.0, 0.5, 4.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> ys;
    for (int j = -150; j <= 150; ++j) ys.push_back(j + J(rng));
    std::vector<double> xs;
    for (double y : ys) xs.push_back(blend.zeta_inv(y));
    CHECK(gap_density_bound(blend, SampleSet(xs)).holds);
    CHECK(gap_density_bound(one, SampleSet(ys)).holds);
  }
}

TEST_CASE("quasi-uniform sets have the requested mu_p-density") {
  const auto blend = BandwidthProfile::blend(1.0, 4.0, 2.0);
  const auto X = quasi_uniform_set(blend, 0.7, 100.0);
  CHECK(X.size() == 140);
  for (std::size_t i = 0; i + 1 < X.size(); ++i) CHECK(blend.mu(X[i], X[i + 1]) == doctest::Approx(1 / 0.7).epsilon(1e-9));
  const auto rep = beurling_density(blend, X, {20.0, 40.0}, {blend.zeta_inv(-100.0), blend.zeta_inv(100.0)});
  CHECK(std::abs(rep.D_minus - 0.7) <= 2.0 / 40.0);
}

TEST_CASE("Landau sweep brackets the critical density") {
  std::vector<double> grid;
  for (int c = 5; c <= 15; ++c) grid.push_back(c * 0.1 / kPi);
  const std::vector<double> W{10 * kPi + 1, 20 * kPi + 1, 40 * kPi + 1};
  {
    const auto t = landau_sweep(*make_free_model(SpectralSet::band(1.0), 50.0), BandwidthProfile::constant(1.0), grid, W);
    CHECK(t.critical == doctest::Approx(1 / kPi));
    REQUIRE(t.last_degenerating);
    REQUIRE(t.first_stable);
    CHECK(*t.last_degenerating < t.critical);
    CHECK(*t.first_stable >= t.critical * (1 - 1e-12));
    CHECK(*t.first_stable - *t.last_degenerating == doctest::Approx(0.1 / kPi));
    // Oversampling keeps A_est; undersampling loses it.
    for (const auto& row : t.rows) {
      if (row.density > 1.9 * t.critical) CHECK(row.frame.A_est > 0.1);
      if (row.density < 0.55 * t.critical) CHECK(row.frame.A_est == 0.0);
    }
    std::ostringstream os;
    write_landau_csv(os, t);
    CHECK(os.str().rfind("density,window,A_est,B_est,riesz_lower,samples,dimension\n", 0) == 0);
  }
  {
    const auto blend = BandwidthProfile::blend(1.0, 4.0, 2.0);
    const auto t = landau_sweep(*make_liouville_model(blend, SpectralSet::band(1.0), 50.0), blend, grid, W);
    REQUIRE(t.last_degenerating);
    REQUIRE(t.first_stable);
    CHECK(*t.last_degenerating < t.critical);
    CHECK(*t.first_stable >= t.critical * (1 - 1e-12));
    CHECK(*t.first_stable - *t.last_degenerating == doctest::Approx(0.1 / kPi));
  }
}

TEST_CASE("density CSV") {
  const auto rep = beurling_density(BandwidthProfile::constant(1.0), SampleSet(lattice(1.0, 50.0)), {4.0, 8.0}, {-50.0, 50.0});
  std::ostringstream os;
  write_density_csv(os, rep);
  const std::string s = os.str();
  CHECK(s.rfind("r,inf_count_over_r,sup_count_over_r\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 3);
}
