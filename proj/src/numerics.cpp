#include "varband/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "varband/error.hpp"

namespace varband {

double sinc(double t) {
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

double QuadRule::weight_sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

namespace {

// Legendre P_n and its derivative at x via the three-term recurrence.
void legendre(int n, double x, double& pn, double& dpn) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  dpn = n * (x * p1 - p0) / (x * x - 1.0);
}

QuadRule build_gauss_legendre(int n) {
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pn = 0.0, dpn = 0.0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, pn, dpn);
      const double dx = pn / dpn;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(n, x, pn, dpn);
    const double w = 2.0 / ((1.0 - x * x) * dpn * dpn);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const QuadRule& gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre: order must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) {
    if (n == 1) {
      slot = std::make_unique<QuadRule>(QuadRule{{0.0}, {2.0}});
    } else {
      slot = std::make_unique<QuadRule>(build_gauss_legendre(n));
    }
  }
  return *slot;
}

QuadRule composite_gauss_legendre(double a, double b, double max_panel, int order) {
  QuadRule out;
  if (!(b > a)) return out;
  if (!(max_panel > 0)) throw InvalidArgument("composite_gauss_legendre: panel width must be positive");
  const QuadRule& gl = gauss_legendre(order);
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_panel - 1e-12));
  const std::size_t np = std::max<std::size_t>(panels, 1);
  const double h = (b - a) / static_cast<double>(np);
  out.nodes.reserve(np * gl.size());
  out.weights.reserve(np * gl.size());
  for (std::size_t k = 0; k < np; ++k) {
    const double lo = a + h * static_cast<double>(k);
    const double mid = lo + 0.5 * h;
    for (std::size_t i = 0; i < gl.size(); ++i) {
      out.nodes.push_back(mid + 0.5 * h * gl.nodes[i]);
      out.weights.push_back(0.5 * h * gl.weights[i]);
    }
  }
  return out;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const AdaptiveOptions& opts) {
  if (a == b) return 0.0;
  double err = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
      f, a, b, static_cast<unsigned>(opts.max_depth), opts.rel_tol, &err, &l1);
  const double allowed = std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
  if (!(err <= allowed) || !std::isfinite(value)) {
    throw ConvergenceError("adaptive quadrature did not converge on [" + std::to_string(a) +
                               ", " + std::to_string(b) + "]",
                           err);
  }
  return value;
}

namespace {
std::atomic<unsigned> g_threads{1};
}

void set_thread_count(unsigned n) {
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  g_threads.store(n);
}

unsigned thread_count() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next.store(n);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace varband
