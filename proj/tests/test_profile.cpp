#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "varband/error.hpp"
#include "varband/profile.hpp"

using namespace varband;

TEST_CASE("eval_p examples") {
  CHECK(eval_p(BandwidthProfile::constant(1.0), 3.7) == 1.0);
  const auto toy = BandwidthProfile::toy(1.0, 4.0);
  CHECK(eval_p(toy, -0.5) == 1.0);
  CHECK(eval_p(toy, 0.5) == 4.0);
  CHECK(eval_p(toy, 0.0) == 4.0);  // right limit at the breakpoint
  const auto sm = BandwidthProfile::blend(1.0, 2.0, 1.0);
  CHECK(eval_p(sm, 2.0) == 2.0);
  CHECK(eval_p(sm, -2.0) == 1.0);
  CHECK(eval_p(sm, 0.0) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("mu_p examples") {
  CHECK(mu_p(BandwidthProfile::constant(1.0), {0.0, 2.0}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(mu_p(BandwidthProfile::toy(1.0, 4.0), {-1.0, 1.0}) == doctest::Approx(1.5).epsilon(1e-15));
  const auto sm = BandwidthProfile::blend(1.0, 3.0, 2.0);
  CHECK(mu_p(sm, {0.7, 0.7}) == 0.0);
  CHECK(mu_p(BandwidthProfile::toy(1.0, 4.0), {0.3, 0.3}) == 0.0);
}

TEST_CASE("mu_p on a smooth blend matches an independent midpoint sum") {
  const auto sm = BandwidthProfile::blend(1.0, 3.0, 2.0);
  const double a = -3.0, b = 2.5;
  const int n = 200000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = a + (b - a) * (i + 0.5) / n;
    s += 1.0 / std::sqrt(eval_p(sm, x));
  }
  s *= (b - a) / n;
  CHECK(mu_p(sm, {a, b}) == doctest::Approx(s).epsilon(1e-9));
}

TEST_CASE("zeta examples") {
  const auto one = BandwidthProfile::constant(1.0);
  for (double x : {-7.5, -1.0, 0.0, 0.3, 12.0}) CHECK(zeta(one, x) == doctest::Approx(x).epsilon(1e-15));
  const auto four = BandwidthProfile::constant(4.0);
  for (double x : {-7.5, 0.3, 12.0}) CHECK(zeta(four, x) == doctest::Approx(x / 2).epsilon(1e-15));
  CHECK(zeta(BandwidthProfile::toy(1.0, 4.0), 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(zeta(BandwidthProfile::toy(1.0, 4.0), -2.0) == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("zeta round trip, monotonicity and additivity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-40.0, 40.0);
  const std::vector<BandwidthProfile> profiles = {
      BandwidthProfile::toy(1.0, 4.0), BandwidthProfile::piecewise({-2.0, 0.5, 3.0}, {2.0, 0.5, 5.0, 1.0}),
      BandwidthProfile::blend(1.0, 4.0, 1.0), BandwidthProfile::blend(3.0, 0.5, 2.5, BlendKind::quintic)};
  for (const auto& p : profiles) {
    CHECK(zeta(p, 0.0) == 0.0);
    double prev = -1e300;
    for (int i = -400; i <= 400; ++i) {
      const double z = zeta(p, i * 0.05);
      CHECK(z > prev);
      prev = z;
    }
    for (int i = 0; i < 300; ++i) {
      const double x = U(rng);
      CHECK(std::abs(zeta_inv(p, zeta(p, x)) - x) < 1e-9 * (1 + std::abs(x)));
      const double y = U(rng);
      CHECK(std::abs(zeta(p, zeta_inv(p, y)) - y) < 1e-11 * (1 + std::abs(y)));
      double a = U(rng), b = U(rng), c = U(rng);
      if (a > b) std::swap(a, b);
      if (b > c) std::swap(b, c);
      if (a > b) std::swap(a, b);
      CHECK(mu_p(p, {a, c}) == doctest::Approx(mu_p(p, {a, b}) + mu_p(p, {b, c})).epsilon(1e-12));
      const double len = c - a;
      const double m = mu_p(p, {a, c});
      CHECK(m <= len / std::sqrt(p.lower_bound()) * (1 + 1e-12));
      CHECK(m >= len / std::sqrt(p.upper_bound()) * (1 - 1e-12));
    }
  }
}

TEST_CASE("mu_p keeps relative accuracy on tiny intervals far from the origin") {
  const auto sm = BandwidthProfile::blend(1.0, 4.0, 1.0);
  CHECK(mu_p(sm, {1000.0, 1000.0 + 1e-9}) == doctest::Approx(0.5e-9).epsilon(1e-9));
  CHECK(mu_p(sm, {0.2, 0.2 + 1e-9}) == doctest::Approx(1e-9 / std::sqrt(eval_p(sm, 0.2))).epsilon(1e-6));
}

TEST_CASE("eta uses the 1/p integrand") {
  CHECK(eta(BandwidthProfile::constant(2.0), 3.0) == doctest::Approx(1.5).epsilon(1e-15));
  const auto toy = BandwidthProfile::toy(1.0, 4.0);
  CHECK(eta(toy, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eta_inv(toy, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("potential_q") {
  CHECK(potential_q(BandwidthProfile::constant(3.0), 1.0) == 0.0);
  CHECK_THROWS_AS(potential_q(BandwidthProfile::toy(1.0, 4.0), 0.5), UnsupportedProfile);
  const auto sm = BandwidthProfile::blend(1.0, 4.0, 1.5);
  for (double x : {-1.2, -0.4, 0.0, 0.33, 1.1}) {
    const double h = 1e-4;
    const double p0 = eval_p(sm, x), pp = eval_p(sm, x + h), pm = eval_p(sm, x - h);
    const double d1 = (pp - pm) / (2 * h), d2 = (pp - 2 * p0 + pm) / (h * h);
    CHECK(potential_q(sm, x) == doctest::Approx(d2 / 4 - d1 * d1 / (16 * p0)).epsilon(1e-6));
  }
  for (double x : {-1.6, 1.6, 5.0, -30.0}) CHECK(potential_q(sm, x) == 0.0);
}

TEST_CASE("max_gap_delta") {
  std::vector<double> z;
  for (int i = -5; i <= 5; ++i) z.push_back(i);
  CHECK(max_gap_delta(BandwidthProfile::constant(1.0), SampleSet(z)) == doctest::Approx(1.0));
  const auto toy = BandwidthProfile::toy(1.0, 4.0);
  const SampleSet X({-1.0, 0.0, 1.0});
  const auto r = gap_ratios(toy, X);
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(0.5));
  CHECK(max_gap_delta(toy, X) == doctest::Approx(1.0));
  const double d = max_gap_delta(BandwidthProfile::constant(1.0), SampleSet({0.0, kPi / 2}));
  CHECK(d == doctest::Approx(kPi / 2));
  CHECK(d < kPi);
  const auto sm = BandwidthProfile::blend(4.0, 1.0, 1.0);
  CHECK(max_gap_delta(sm, SampleSet({-3.0, -2.0})) == doctest::Approx(0.5));
  CHECK(max_gap_delta(sm, SampleSet({-0.5, 3.0})) == doctest::Approx(3.5));
}

TEST_CASE("admissibility_check") {
  CHECK(admissibility_check(BandwidthProfile::constant(1.0)).pass);
  CHECK(admissibility_check(BandwidthProfile::toy(1.0, 4.0)).pass);
  const auto bad = admissibility_check(BandwidthProfile::piecewise({0.0}, {1.0, 0.0}));
  CHECK_FALSE(bad.pass);
  REQUIRE_FALSE(bad.reasons.empty());
  CHECK(bad.reasons[0] == "not bounded below");
  CHECK_THROWS_AS(zeta(BandwidthProfile::piecewise({0.0}, {1.0, 0.0}), 1.0), InvalidArgument);
}

TEST_CASE("smooth profile derivative check rejects wrong derivatives") {
  SmoothEventuallyConstant s;
  s.p = [](double x) { return std::abs(x) < 1 ? 2.0 + std::pow(std::cos(kPi * x / 2), 4) : 2.0; };
  s.dp = [](double x) { return std::abs(x) < 1 ? 2.0 * std::sin(kPi * x) : 0.0; };  // wrong
  s.d2p = [](double) { return 0.0; };
  s.radius = 1.0;
  s.p_minus = s.p_plus = 2.0;
  CHECK_THROWS_AS(BandwidthProfile::smooth(s), InvalidArgument);
  CHECK_THROWS_AS(BandwidthProfile::piecewise({1.0, 0.0}, {1.0, 2.0, 3.0}), InvalidArgument);
  CHECK_THROWS_AS(BandwidthProfile::piecewise({0.0}, {1.0}), InvalidArgument);
}
