#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace varband {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Unnormalized sinc, sin(t)/t.
double sinc(double t);

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  double weight_sum() const;
};

// Gauss-Legendre rule of order n on [-1, 1]; cached per order.
const QuadRule& gauss_legendre(int n);

// Panels of width at most max_panel, each carrying an order-point rule.
QuadRule composite_gauss_legendre(double a, double b, double max_panel, int order);

struct AdaptiveOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_depth = 30;
};

// Adaptive Gauss-Kronrod; throws ConvergenceError when the error estimate
// stays above max(abs_tol, rel_tol*|I|).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const AdaptiveOptions& opts = {});

// Cubic Hermite on [x0, x0+h] from values and derivatives at both ends.
template <class T>
T hermite(double t, double h, const T& y0, const T& d0, const T& y1, const T& d1) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y0 + (h10 * h) * d0 + h01 * y1 + (h11 * h) * d1;
}

// Derivative of the Hermite interpolant with respect to x.
template <class T>
T hermite_derivative(double t, double h, const T& y0, const T& d0, const T& y1,
                     const T& d1) {
  const double t2 = t * t;
  const double g00 = (6 * t2 - 6 * t) / h;
  const double g10 = 3 * t2 - 4 * t + 1;
  const double g01 = (-6 * t2 + 6 * t) / h;
  const double g11 = 3 * t2 - 2 * t;
  return g00 * y0 + g10 * d0 + g01 * y1 + g11 * d1;
}

// Integral of the Hermite interpolant over [x0, x0 + t*h].
template <class T>
T hermite_integral(double t, double h, const T& y0, const T& d0, const T& y1,
                   const T& d1) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double t4 = t3 * t;
  const double i00 = 0.5 * t4 - t3 + t;
  const double i10 = 0.25 * t4 - (2.0 / 3.0) * t3 + 0.5 * t2;
  const double i01 = -0.5 * t4 + t3;
  const double i11 = 0.25 * t4 - t3 / 3.0;
  return h * (i00 * y0 + (i10 * h) * d0 + i01 * y1 + (i11 * h) * d1);
}

// Worker count for parallel_for; 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, n); results must be written to disjoint slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace varband
