#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "varband/error.hpp"
#include "varband/schrodinger.hpp"
#include "varband/sturm.hpp"

using namespace varband;

namespace {

// Transmission through q = q0 on [-a, a]: with k^2 = w^2 - q0 and L = 2a,
// t = e^{-iwL} / (cos kL - i (w^2 + k^2)/(2wk) sin kL), the k -> -k even
// continuation covering q0 > w^2.
cplx square_well_oracle(double q0, double a, double w) {
  const cplx k = std::sqrt(cplx(w * w - q0, 0.0));
  const double L = 2 * a;
  const cplx I(0, 1);
  const cplx s = std::abs(k) < 1e-12 ? cplx(L, 0) * k : std::sin(k * L);
  const cplx ratio = std::abs(k) < 1e-12 ? cplx(L) : s / k;
  return std::exp(-I * w * L) / (std::cos(k * L) - I * (w * w + k * k) / (2 * w) * ratio);
}

std::vector<BandwidthProfile> blend_profiles() {
  return {BandwidthProfile::blend(1.0, 4.0, 1.0), BandwidthProfile::blend(4.0, 1.0, 0.5),
          BandwidthProfile::blend(2.0, 3.0, 2.0, BlendKind::quintic)};
}

}  // namespace

TEST_CASE("free particle") {
  const auto d = scattering_coeffs(Potential::zero(), 1.3);
  CHECK(d.T == cplx(1.0, 0.0));
  CHECK(d.R1 == cplx(0.0, 0.0));
  CHECK(d.R2 == cplx(0.0, 0.0));
  for (double x : {-3.0, 0.0, 2.0}) {
    const auto phi = scattering_solution(Potential::zero(), 1.3, x);
    CHECK(std::abs(phi[0] - std::exp(cplx(0, 1.3 * x))) < 1e-15);
    CHECK(std::abs(phi[1] - std::exp(cplx(0, -1.3 * x))) < 1e-15);
  }
}

TEST_CASE("square well transmission matches the textbook formula") {
  for (double q0 : {-3.0, -0.5, 0.7, 2.0}) {
    for (double a : {0.5, 1.0, 2.0}) {
      for (double w : {0.2, 0.9, 1.4, 3.0, 7.5}) {
        const auto d = scattering_coeffs(Potential::square_well(q0, a), w);
        CHECK(std::abs(d.T - square_well_oracle(q0, a, w)) < 1e-7);
        CHECK(d.unitarity_defect() < 1e-7);
      }
    }
  }
}

TEST_CASE("Liouville potentials: unitarity and |R1| = |R2| on 200 nodes") {
  for (const auto& p : blend_profiles()) {
    const auto q = Potential::from_profile(p);
    ScatteringSolver solver(q, 6.0);
    double worst = 0.0, refl = 0.0;
    for (int i = 1; i <= 200; ++i) {
      const auto d = solver.solve(6.0 * i / 200.0).data();
      worst = std::max(worst, d.unitarity_defect());
      refl = std::max(refl, std::abs(std::abs(d.R1) - std::abs(d.R2)));
      CHECK(std::abs(d.T - d.T_right) < 1e-7);
    }
    CHECK(worst < 1e-7);
    CHECK(refl < 1e-7);
  }
}

TEST_CASE("potential support lies inside [zeta(-R), zeta(R)]") {
  const auto p = BandwidthProfile::blend(1.0, 4.0, 1.0);
  const auto q = Potential::from_profile(p);
  CHECK(q.support().a == doctest::Approx(zeta(p, -1.0)));
  CHECK(q.support().b == doctest::Approx(zeta(p, 1.0)));
  CHECK(q.radius() == doctest::Approx(std::max(-zeta(p, -1.0), zeta(p, 1.0))));
  CHECK(q(q.support().a - 1e-9) == 0.0);
  CHECK(q(q.support().b + 1e-9) == 0.0);
  CHECK(q(0.0) != 0.0);
  CHECK_THROWS_AS(Potential::from_profile(BandwidthProfile::toy(1.0, 4.0)), UnsupportedProfile);
}

TEST_CASE("scattering solution: continuity at +-a and the Wronskian -2iwT") {
  const auto q = Potential::from_profile(BandwidthProfile::blend(1.0, 4.0, 1.0));
  ScatteringSolver solver(q, 3.0);
  for (double w : {0.3, 1.1, 2.9}) {
    const auto sol = solver.solve(w);
    const double a = q.radius();
    for (double edge : {-a, a}) {
      const double e = 1e-12;
      const auto in = sol.value(edge - (edge > 0 ? e : -e));
      const auto out = sol.value(edge + (edge > 0 ? e : -e));
      CHECK(std::abs(in[0] - out[0]) < 1e-8);
      CHECK(std::abs(in[1] - out[1]) < 1e-8);
    }
    const cplx expected = cplx(0, -2) * w * sol.data().T;
    for (double x : {-5.0, -a, -0.3, 0.0, 0.41, a, 4.0}) {
      const auto v = sol.value(x);
      const auto d = sol.derivative(x);
      CHECK(std::abs(v[0] * d[1] - d[0] * v[1] - expected) < 1e-7);
    }
  }
}

TEST_CASE("interval integrals of Phi agree with Gauss-Legendre quadrature of Phi") {
  const auto q = Potential::from_profile(BandwidthProfile::blend(2.0, 0.5, 1.0));
  ScatteringSolver solver(q, 2.0);
  const auto sol = solver.solve(1.7);
  for (auto [lo, hi] : {std::pair{-4.0, -2.5}, {-3.0, 0.2}, {-0.4, 0.9}, {0.3, 5.0}, {-6.0, 6.0}}) {
    const auto rule = composite_gauss_legendre(lo, hi, 0.01, 12);
    cplx s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto v = sol.value(rule.nodes[i]);
      s0 += rule.weights[i] * v[0];
      s1 += rule.weights[i] * v[1];
    }
    const auto got = sol.integral(lo, hi);
    CHECK(std::abs(got[0] - s0) < 1e-9);
    CHECK(std::abs(got[1] - s1) < 1e-9);
  }
}

TEST_CASE("high-frequency transparency") {
  for (const auto& p : blend_profiles()) {
    const auto q = Potential::from_profile(p);
    const double a = q.radius();
    const double w = 50.0 / a;
    const auto d = scattering_coeffs(q, w);
    CHECK(std::abs(d.T - 1.0) < 0.05);
    double prev = 1e300;
    int rises = 0;
    for (int i = 0; i <= 12; ++i) {
      const double wi = 0.5 / a * std::pow(100.0, i / 12.0);
      const double r = std::abs(scattering_coeffs(q, wi).R2);
      if (r > prev) ++rises;
      prev = r;
    }
    MESSAGE("reflection rises on log grid: " << rises);
  }
}

TEST_CASE("Liouville transform maps tau_p solutions to Schrodinger solutions") {
  const auto p = BandwidthProfile::blend(1.0, 4.0, 1.0);
  const double lambda = 2.0;
  const auto sol = solve_eigen(p, lambda, {-2.0, 1.0, 0.3}, {-2.0, 2.0}, default_step(p, lambda));
  const auto q = Potential::from_profile(p);
  auto psi = [&](double s) {
    const double x = zeta_inv(p, s);
    return std::pow(eval_p(p, x), 0.25) * sol.phi(x);
  };
  const double h = 1e-3;
  for (double s : {-1.0, -0.6, -0.2, 0.1, 0.4, 0.55}) {
    const cplx d2 = (psi(s + h) - 2.0 * psi(s) + psi(s - h)) / (h * h);
    const cplx residual = -d2 + q(s) * psi(s) - lambda * psi(s);
    CHECK(std::abs(residual) < 1e-6 * lambda * std::max(1.0, std::abs(psi(s))) * 10);
  }
}

TEST_CASE("omega = 0 is rejected and CSV export") {
  CHECK_THROWS_AS(scattering_coeffs(Potential::square_well(1.0, 1.0), 0.0), InvalidArgument);
  CHECK_THROWS_AS(scattering_coeffs(Potential::square_well(1.0, 1.0), 1e-13), ConditioningError);
  std::ostringstream os;
  write_scattering_csv(os, {scattering_coeffs(Potential::zero(), 1.0)});
  CHECK(os.str() == "omega,re_T,im_T,re_R1,im_R1,re_R2,im_R2,unitarity_defect\n1,1,0,0,0,0,0,0\n");
}

TEST_CASE("Liouville potentials keep their zero-energy resonance") {
  // p^{1/4} solves the zero-energy equation, so T(0+) matches the step profile with the same end values.
  for (auto [pm, pp] : {std::pair{1.0, 4.0}, {3.0, 1.0}, {2.0, 2.5}}) {
    for (auto kind : {BlendKind::cubic, BlendKind::quintic}) {
      const auto q = Potential::from_profile(BandwidthProfile::blend(pm, pp, 1.3, kind));
      const auto d = scattering_coeffs(q, 1e-4);
      const double sm = std::sqrt(pm), sp = std::sqrt(pp);
      CHECK(std::abs(d.T) == doctest::Approx(2.0 * std::sqrt(sm * sp) / (sm + sp)).epsilon(1e-6));
      CHECK(std::abs(d.R1) == doctest::Approx(std::abs(sp - sm) / (sp + sm)).epsilon(1e-5));
    }
  }
}
