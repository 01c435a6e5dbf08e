#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>
#include <sstream>
#include <unsupported/Eigen/FFT>

#include "varband/error.hpp"
#include "varband/kernel.hpp"
#include "varband/paleywiener.hpp"

using namespace varband;

namespace {

struct Fixture {
  BandwidthProfile blend = BandwidthProfile::blend(1.0, 4.0, 1.0);
  SpectralSet band = SpectralSet::band(1.0);
  std::vector<std::pair<std::string, ModelPtr>> models() const {
    return {{"free", make_free_model(band, 120.0)},
            {"toy", make_toy_model(1.0, 4.0, band, 120.0)},
            {"schrodinger", make_schrodinger_model(Potential::from_profile(blend), band, 120.0)},
            {"liouville", make_liouville_model(blend, band, 120.0)},
            {"halfline", make_halfline_model(1.0, 120.0)}};
  }
};

}  // namespace

TEST_CASE("synthesis basics") {
  const auto model = make_free_model(SpectralSet::band(1.0), 20.0);
  const auto zero = synthesize(model, std::vector<cplx>(model->dim(), 0.0));
  for (double x : {-5.0, 0.0, 3.3}) CHECK(zero(x) == cplx(0.0));
  CHECK_THROWS_AS(synthesize(model, std::vector<cplx>(3)), InvalidArgument);
  std::mt19937_64 rng(1);
  const auto f = random_function(model, rng);
  CHECK(f.norm() == doctest::Approx(1.0).epsilon(1e-12));
  for (double x : {-1e6, -30.0, 0.0, 7.0, 1e6}) {
    CHECK(std::isfinite(std::abs(f(x))));
    CHECK(std::abs(f(x)) <= evaluation_bound(f, x) * (1 + 1e-12));
  }
  const auto g = f + 2.0 * f - f;
  CHECK(std::abs(g(1.5) - 2.0 * f(1.5)) < 1e-13);
}

TEST_CASE("reproducing element equals the kernel") {
  const double x0 = 0.7;
  const auto free = make_free_model(SpectralSet::band(2.0), 20.0);
  const auto kf = reproducing_element(free, x0);
  const auto toy = make_toy_model(1.0, 4.0, SpectralSet::band(2.0), 20.0);
  const auto kt = reproducing_element(toy, x0);
  for (double y = -15.0; y <= 15.0; y += 0.37) {
    CHECK(std::abs(kf(y) - kernel(ToyClosedForm{1, 1, 2.0}, y, x0)) < 1e-9);
    CHECK(std::abs(kt(y) - kernel(ToyClosedForm{1, 4, 2.0}, y, x0)) < 1e-7);
  }
}

TEST_CASE("free synthesis is band-limited: FFT out-of-band energy") {
  const auto model = make_free_model(SpectralSet::band(1.0), 300.0);
  std::mt19937_64 rng(2);
  const auto f = random_function(model, rng);
  const double L = 300.0, dx = 0.25;
  const int N = static_cast<int>(2 * L / dx);
  std::vector<double> xs(N);
  for (int n = 0; n < N; ++n) xs[n] = -L + dx * n;
  const auto v = f.values(xs);
  Eigen::FFT<double> fft;
  std::vector<cplx> spec;
  fft.fwd(spec, v);
  double in = 0.0, out = 0.0;
  for (int k = 0; k < N; ++k) {
    const int kk = k <= N / 2 ? k : k - N;
    const double xi = 2.0 * kPi * kk / (N * dx);
    (std::abs(xi) <= 1.0 ? in : out) += std::norm(spec[k]);
  }
  CHECK(out / (in + out) < 1e-4);
}

TEST_CASE("Parseval on random functions for every model") {
  Fixture fx;
  std::mt19937_64 rng(3);
  for (const auto& [name, model] : fx.models()) {
    CAPTURE(name);
    const Interval window{-100.0, 100.0};
    for (int t = 0; t < 3; ++t) {
      const auto f = random_function(model, rng);
      CHECK(spatial_norm(f, window) == doctest::Approx(f.norm()).epsilon(1e-3));
    }
  }
}

TEST_CASE("evaluation against the transform of the kernel, and spatial reproduction") {
  Fixture fx;
  std::mt19937_64 rng(4);
  for (const auto& [name, model] : fx.models()) {
    CAPTURE(name);
    // Fast spatial decay keeps the pairing with the slowly decaying kernel inside the window.
    const auto f = random_function(model, rng, 6);
    const Interval window{-100.0, 100.0};
    for (double x : {-1.3, 2.2}) {
      const auto kx = reproducing_element(model, x);
      TransformOptions loose;
      loose.tail_tolerance = 1.0;
      const auto G = spectral_transform(*model, [&](double y) { return kx(y); }, window, loose);
      cplx ip = 0.0;
      for (std::size_t i = 0; i < G.size(); ++i) ip += model->weights()[i] * f.coefficients()[i] * std::conj(G[i]);
      CHECK(std::abs(ip - f(x)) < 1e-6);
      const KernelRow row(SpectralSum{model}, x);
      const auto rule = spatial_rule(*model, window);
      const auto fv = f.values(rule.nodes);
      cplx s = 0.0;
      for (std::size_t n = 0; n < rule.size(); ++n) s += rule.weights[n] * row(rule.nodes[n]) * fv[n];
      CHECK(std::abs(s - f(x)) < 1e-4);
    }
  }
}

TEST_CASE("spectral transform of a synthesized function returns its coefficients") {
  const auto model = make_toy_model(2.0, 3.0, SpectralSet({{0.25, 1.0}, {2.0, 4.0}}), 200.0);
  std::mt19937_64 rng(5);
  const auto f = random_function(model, rng);
  TransformOptions opts;
  opts.tail_tolerance = 1e-5;
  const auto G = spectral_transform(*model, [&](double y) { return f(y); }, {-200.0, 200.0}, opts);
  double err = 0.0;
  for (std::size_t i = 0; i < G.size(); ++i) err += model->weights()[i] * std::norm(G[i] - f.coefficients()[i]);
  CHECK(std::sqrt(err) < 1e-3);
  CHECK_THROWS_AS(spectral_transform(*model, [&](double y) { return f(y); }, {-10.0, 10.0}), TruncationError);
}

TEST_CASE("step projection") {
  const auto model = make_free_model(SpectralSet::band(1.0), 40.0);
  const double h = 0.8;
  const auto box = project_step(model, {-h / 2, h / 2}, {1.0}, {-40.0, 40.0});
  const double sigma = 1.0 / std::sqrt(2.0 * kPi);
  for (std::size_t l = 0; l < model->nodes(); ++l) {
    const double expected = sigma * h * sinc(model->omega(l) * h / 2);
    CHECK(std::abs(box.coefficients()[2 * l] - expected) < 1e-13);
    CHECK(std::abs(box.coefficients()[2 * l + 1] - expected) < 1e-13);
  }
  const auto zero = project_step(model, {-1.0, 0.0, 1.0}, {0.0, 0.0}, {-40.0, 40.0});
  CHECK(zero.norm() == 0.0);
  CHECK_THROWS_AS(project_step(model, {-50.0, 0.0}, {1.0}, {-40.0, 40.0}), InvalidArgument);
  CHECK_THROWS_AS(project_step(model, {0.0, 1.0, 2.0}, {1.0}, {-40.0, 40.0}), InvalidArgument);
}

TEST_CASE("projection is idempotent on the space") {
  const auto blend = BandwidthProfile::blend(1.0, 4.0, 1.0);
  // The Liouville window is doubled: zeta(x) = x / 2 on the right plateau stretches f.
  const std::vector<std::pair<ModelPtr, double>> cases{
      {make_free_model(SpectralSet::band(1.0), 70.0), 60.0},
      {make_liouville_model(blend, SpectralSet::band(1.0), 130.0), 120.0}};
  for (const auto& [model, L] : cases) {
    std::mt19937_64 rng(6);
    const auto f = random_function(model, rng, 6);
    const double eps = 0.01;
    const int cells = static_cast<int>(2 * L / eps);
    std::vector<double> bp(cells + 1), mid(cells);
    for (int i = 0; i <= cells; ++i) bp[i] = -L + eps * i;
    for (int i = 0; i < cells; ++i) mid[i] = 0.5 * (bp[i] + bp[i + 1]);
    const auto g = project_step(model, bp, f.values(mid), {-L, L});
    CHECK((g - f).norm() < 1e-5 * f.norm());
  }
}

TEST_CASE("Bernstein ratio") {
  Fixture fx;
  const double Omega = 1.0;
  std::mt19937_64 rng(7);
  for (const auto& [name, model] : fx.models()) {
    CAPTURE(name);
    for (int t = 0; t < 100; ++t) {
      const auto f = random_function(model, rng);
      for (int k = 0; k <= 4; ++k) CHECK(bernstein_ratio(f, k, Omega) <= 1.0 + 1e-9);
      CHECK(bernstein_ratio(f, 0, Omega) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  const auto model = make_free_model(SpectralSet::band(Omega), 20.0);
  auto spike = [&](double target) {
    std::vector<cplx> F(model->dim(), 0.0);
    std::size_t best = 0;
    for (std::size_t l = 0; l < model->nodes(); ++l)
      if (std::abs(model->lambda(l) - target) < std::abs(model->lambda(best) - target)) best = l;
    F[2 * best] = 1.0;
    return std::pair{synthesize(model, F), model->lambda(best)};
  };
  // The spike sits on the nearest node, within one panel of the target.
  const double tol = 2.0 * model->quadrature().spacing();
  const auto [top, l_top] = spike(Omega);
  CHECK(bernstein_ratio(top, 1, Omega) == doctest::Approx(l_top / Omega).epsilon(1e-12));
  CHECK(bernstein_ratio(top, 1, Omega) == doctest::Approx(1.0).epsilon(tol));
  const auto [quarter, l_quarter] = spike(Omega / 4);
  CHECK(bernstein_ratio(quarter, 1, Omega) == doctest::Approx(l_quarter / Omega).epsilon(1e-12));
  CHECK(std::abs(bernstein_ratio(quarter, 1, Omega) - 0.25) < tol);
  CHECK_THROWS_AS(bernstein_ratio(synthesize(model, std::vector<cplx>(model->dim(), 0.0)), 1, Omega), InvalidArgument);
}

TEST_CASE("warped band-limited evaluation") {
  auto box = [](double) { return cplx(1.0); };
  const std::vector<Interval> lam{{-1.0, 1.0}};
  auto closed = [](double t) { return 2.0 * sinc(t) / std::sqrt(2.0 * kPi); };
  const auto one = BandwidthProfile::constant(1.0), two = BandwidthProfile::constant(2.0);
  for (double x : {-7.5, -1.0, 0.0, 0.3, 12.0}) {
    CHECK(std::abs(warped_bandlimited_eval(one, box, lam, x) - closed(x)) < 1e-12);
    // Direct quadrature with the first-order fundamental solution e^{i l x / 2}.
    auto re = [&](double l) { return std::cos(l * x / 2); };
    auto im = [&](double l) { return std::sin(l * x / 2); };
    const cplx direct = cplx(boost::math::quadrature::gauss_kronrod<double, 31>::integrate(re, -1.0, 1.0, 15, 1e-14),
                             boost::math::quadrature::gauss_kronrod<double, 31>::integrate(im, -1.0, 1.0, 15, 1e-14)) /
                        std::sqrt(2.0 * kPi);
    CHECK(std::abs(warped_bandlimited_eval(two, box, lam, x) - direct) < 1e-8);
    CHECK(std::abs(warped_bandlimited_eval(two, box, lam, x) - closed(x / 2)) < 1e-12);
  }
  // Sampling the warped function at eta^{-1}(uniform grid) gives the classical samples.
  const auto p = BandwidthProfile::blend(0.5, 3.0, 2.0);
  auto F = [](double l) { return cplx(std::cos(l), 0.3 * l); };
  const std::vector<Interval> set{{-2.0, -0.5}, {0.0, 1.5}};
  for (int j = -10; j <= 10; ++j) {
    const double t = 0.9 * j;
    CHECK(std::abs(warped_bandlimited_eval(p, F, set, p.eta_inv(t)) - classical_bandlimited_eval(F, set, t)) < 1e-9);
  }
}

TEST_CASE("CSV dumps") {
  const auto model = make_halfline_model(1.0, 5.0, 2);
  std::vector<cplx> F(model->dim(), 0.0);
  const auto f = synthesize(model, F);
  std::ostringstream a, b;
  write_function_csv(a, f, {0.0, 1.5});
  CHECK(a.str() == "x,re_f,im_f\n0,0,0\n1.5,0,0\n");
  write_coefficients_csv(b, f);
  const std::string coeffs = b.str();
  CHECK(coeffs.rfind("omega,re_F1,im_F1,re_F2,im_F2\n", 0) == 0);
  CHECK(std::count(coeffs.begin(), coeffs.end(), '\n') == static_cast<long>(model->nodes() + 1));
}
