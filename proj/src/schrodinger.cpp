#include "varband/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "varband/error.hpp"

namespace varband {

Potential::Potential(std::function<double(double)> q, double radius, Interval support, std::string name)
    : q_(std::move(q)), radius_(radius), support_(support), name_(std::move(name)) {}

Potential Potential::zero() { return Potential(nullptr, 0.0, {0.0, 0.0}, "zero"); }

Potential Potential::square_well(double depth, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("square_well: radius must be positive");
  std::ostringstream os;
  os << "square_well(depth=" << depth << ", a=" << radius << ")";
  return Potential([depth](double) { return depth; }, radius, {-radius, radius}, os.str());
}

Potential Potential::from_profile(const BandwidthProfile& profile) {
  if (profile.is_piecewise()) {
    if (profile.piecewise_data().breakpoints.empty()) return zero();
    throw UnsupportedProfile("Liouville potential needs a smooth profile");
  }
  const double R = profile.smooth_data().radius;
  const double lo = profile.zeta(-R), hi = profile.zeta(R);
  const double a = std::max(-lo, hi);
  auto q = [profile, lo, hi](double s) {
    if (s <= lo || s >= hi) return 0.0;
    return potential_q(profile, profile.zeta_inv(s));
  };
  return Potential(q, a, {lo, hi}, "liouville(" + profile.describe() + ")");
}

Potential Potential::custom(std::function<double(double)> q, double radius, std::string name) {
  if (!(radius >= 0.0)) throw InvalidArgument("custom potential: radius must be nonnegative");
  return Potential(std::move(q), radius, {-radius, radius}, std::move(name));
}

double Potential::operator()(double s) const {
  if (!q_ || s < -radius_ || s > radius_) return 0.0;
  return q_(s);
}

double ScatteringData::unitarity_defect() const {
  // Frobenius norm of S*S - I for S = [[T, R1], [R2, T]].
  const double d11 = std::norm(T) + std::norm(R2) - 1.0;
  const double d22 = std::norm(R1) + std::norm(T) - 1.0;
  const cplx d12 = std::conj(T) * R1 + std::conj(R2) * T;
  return std::sqrt(d11 * d11 + d22 * d22 + 2.0 * std::norm(d12));
}

ScatteringSolver::ScatteringSolver(Potential q, double omega_max, ScatteringOptions opts)
    : q_(std::move(q)), omega_max_(omega_max), a_(q_.radius()), lo_(q_.support().a), hi_(q_.support().b) {
  if (!(omega_max > 0.0)) throw InvalidArgument("ScatteringSolver: omega_max must be positive");
  if (a_ == 0.0 || !(hi_ > lo_)) {
    a_ = 0.0;
    return;
  }
  // The grid spans the support exactly, so jumps of q at its ends sit on nodes.
  const double len = hi_ - lo_;
  const double h_target = std::min(opts.max_step, 2.0 * kPi / (opts.steps_per_wavelength * omega_max));
  n_ = static_cast<std::size_t>(std::max(16.0, std::ceil(len / h_target)));
  h_ = len / static_cast<double>(n_);
  auto nodes = std::make_shared<std::vector<double>>(n_ + 1);
  q_mid_.resize(n_);
  for (std::size_t k = 0; k <= n_; ++k) (*nodes)[k] = q_(lo_ + h_ * static_cast<double>(k));
  const double nudge = 1e-9 * h_;
  (*nodes)[0] = q_(lo_ + nudge);
  (*nodes)[n_] = q_(hi_ - nudge);
  for (std::size_t k = 0; k < n_; ++k) q_mid_[k] = q_(lo_ + h_ * (static_cast<double>(k) + 0.5));
  q_nodes_ = std::move(nodes);
}

namespace {

// Splits psi = A e^{-iwx} + B e^{iwx} at x from value and derivative.
void split_waves(cplx psi, cplx dpsi, double omega, double x, cplx& A, cplx& B) {
  const cplx det = 2.0 * kI * omega;
  if (std::abs(det) < 1e-12) throw ConditioningError("plane-wave matching is singular near omega = 0");
  const cplx ratio = dpsi / (kI * omega);
  A = 0.5 * (psi - ratio) * std::exp(kI * (omega * x));
  B = 0.5 * (psi + ratio) * std::exp(-kI * (omega * x));
}

}  // namespace

ScatteringSolution ScatteringSolver::solve(double omega) const {
  if (!(omega > 0.0)) throw InvalidArgument("scattering: omega must be positive");
  if (omega > omega_max_ * (1.0 + 1e-12))
    throw InvalidArgument("scattering: omega exceeds the solver's omega_max");
  ScatteringSolution sol;
  sol.a_ = a_;
  sol.lo_ = lo_;
  sol.hi_ = hi_;
  sol.h_ = h_;
  sol.data_.omega = omega;
  if (a_ == 0.0 || q_.is_zero()) {
    sol.data_.T = sol.data_.T_right = 1.0;
    sol.data_.R1 = sol.data_.R2 = 0.0;
    sol.a_ = sol.lo_ = sol.hi_ = 0.0;
    return sol;
  }
  const double w2 = omega * omega;
  const auto& qn = *q_nodes_;
  sol.q_nodes_ = q_nodes_;
  sol.u_.resize(n_ + 1);
  sol.du_.resize(n_ + 1);
  sol.v_.resize(n_ + 1);
  sol.dv_.resize(n_ + 1);
  double u = 1.0, du = 0.0, v = 0.0, dv = 1.0;
  sol.u_[0] = u, sol.du_[0] = du, sol.v_[0] = v, sol.dv_[0] = dv;
  const double h = h_;
  for (std::size_t k = 0; k < n_; ++k) {
    const double g0 = qn[k] - w2, gm = q_mid_[k] - w2, g1 = qn[k + 1] - w2;
    auto step = [&](double& y, double& dy) {
      const double k1 = dy, l1 = g0 * y;
      const double k2 = dy + 0.5 * h * l1, l2 = gm * (y + 0.5 * h * k1);
      const double k3 = dy + 0.5 * h * l2, l3 = gm * (y + 0.5 * h * k2);
      const double k4 = dy + h * l3, l4 = g1 * (y + h * k3);
      y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      dy += h / 6.0 * (l1 + 2 * l2 + 2 * l3 + l4);
    };
    step(u, du);
    step(v, dv);
    sol.u_[k + 1] = u, sol.du_[k + 1] = du, sol.v_[k + 1] = v, sol.dv_[k + 1] = dv;
  }
  // Cumulative integrals of u and v over Hermite cells.
  sol.cu_.assign(n_ + 1, 0.0);
  sol.cv_.assign(n_ + 1, 0.0);
  for (std::size_t k = 0; k < n_; ++k) {
    sol.cu_[k + 1] = sol.cu_[k] + hermite_integral(1.0, h, sol.u_[k], sol.du_[k], sol.u_[k + 1], sol.du_[k + 1]);
    sol.cv_[k + 1] = sol.cv_[k] + hermite_integral(1.0, h, sol.v_[k], sol.dv_[k], sol.v_[k + 1], sol.dv_[k + 1]);
  }
  const double uN = u, duN = du, vN = v, dvN = dv;

  // Left-incident side: Phi_2 = T e^{-iwx} left of the support.
  const cplx alpha = std::exp(-kI * (omega * lo_)), beta = -kI * omega * alpha;
  cplx A, B;
  split_waves(alpha * uN + beta * vN, alpha * duN + beta * dvN, omega, hi_, A, B);
  if (std::abs(A) < 1e-14) throw ConditioningError("scattering: transmission is unbounded");
  const cplx T = 1.0 / A;
  sol.data_.T = T;
  sol.data_.R2 = B / A;
  sol.c2u_ = T * alpha;
  sol.c2v_ = T * beta;

  // Right side: Phi_1 = T e^{iwx} right of the support, carried back with the inverse transfer matrix.
  const double D = uN * dvN - vN * duN;
  const cplx y1 = std::exp(kI * (omega * hi_)), y2 = kI * omega * y1;
  const cplx gamma = (dvN * y1 - vN * y2) / D, eps = (-duN * y1 + uN * y2) / D;
  cplx Dm, C;  // psi = Dm e^{-iwx} + C e^{iwx} at the left end
  split_waves(gamma, eps, omega, lo_, Dm, C);
  if (std::abs(C) < 1e-14) throw ConditioningError("scattering: transmission is unbounded");
  const cplx T1 = 1.0 / C;
  sol.data_.T_right = T1;
  sol.data_.R1 = Dm / C;
  sol.c1u_ = T1 * gamma;
  sol.c1v_ = T1 * eps;
  return sol;
}

ScatteringSolution::Real2 ScatteringSolution::interior(double x, int what) const {
  const double pos = (x - lo_) / h_;
  const std::size_t n = u_.size() - 1;
  std::size_t k = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(n - 1)));
  const double t = pos - static_cast<double>(k);
  if (what == 0)
    return {hermite(t, h_, u_[k], du_[k], u_[k + 1], du_[k + 1]), hermite(t, h_, v_[k], dv_[k], v_[k + 1], dv_[k + 1])};
  const double w2 = data_.omega * data_.omega;
  const double g0 = (*q_nodes_)[k] - w2, g1 = (*q_nodes_)[k + 1] - w2;
  return {hermite(t, h_, du_[k], g0 * u_[k], du_[k + 1], g1 * u_[k + 1]),
          hermite(t, h_, dv_[k], g0 * v_[k], dv_[k + 1], g1 * v_[k + 1])};
}

std::array<cplx, 2> ScatteringSolution::value(double x) const {
  const double w = data_.omega;
  if (x <= lo_) {
    const cplx e = std::exp(kI * (w * x));
    return {e + data_.R1 * std::conj(e), data_.T * std::conj(e)};
  }
  if (x >= hi_) {
    const cplx e = std::exp(kI * (w * x));
    return {data_.T * e, std::conj(e) + data_.R2 * e};
  }
  const auto r = interior(x, 0);
  return {c1u_ * r.u + c1v_ * r.v, c2u_ * r.u + c2v_ * r.v};
}

std::array<cplx, 2> ScatteringSolution::derivative(double x) const {
  const double w = data_.omega;
  if (x <= lo_) {
    const cplx e = std::exp(kI * (w * x));
    return {kI * w * (e - data_.R1 * std::conj(e)), -kI * w * data_.T * std::conj(e)};
  }
  if (x >= hi_) {
    const cplx e = std::exp(kI * (w * x));
    return {kI * w * data_.T * e, kI * w * (-std::conj(e) + data_.R2 * e)};
  }
  const auto r = interior(x, 1);
  return {c1u_ * r.u + c1v_ * r.v, c2u_ * r.u + c2v_ * r.v};
}

double ScatteringSolution::primitive(double x, bool use_v) const {
  const double pos = (x - lo_) / h_;
  const std::size_t n = u_.size() - 1;
  std::size_t k = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(n - 1)));
  const double t = pos - static_cast<double>(k);
  if (use_v) return cv_[k] + hermite_integral(t, h_, v_[k], dv_[k], v_[k + 1], dv_[k + 1]);
  return cu_[k] + hermite_integral(t, h_, u_[k], du_[k], u_[k + 1], du_[k + 1]);
}

std::array<cplx, 2> ScatteringSolution::tail_integral(double lo, double hi) const {
  // Antiderivatives of the plane-wave tails; lo, hi on the same side.
  const double w = data_.omega;
  auto ep = [&](double x) { return std::exp(kI * (w * x)) / (kI * w); };
  auto em = [&](double x) { return std::exp(-kI * (w * x)) / (-kI * w); };
  if (hi <= lo_) {
    return {ep(hi) - ep(lo) + data_.R1 * (em(hi) - em(lo)), data_.T * (em(hi) - em(lo))};
  }
  return {data_.T * (ep(hi) - ep(lo)), em(hi) - em(lo) + data_.R2 * (ep(hi) - ep(lo))};
}

std::array<cplx, 2> ScatteringSolution::integral(double lo, double hi) const {
  if (!(lo <= hi)) throw InvalidArgument("ScatteringSolution::integral: requires lo <= hi");
  std::array<cplx, 2> out{0.0, 0.0};
  auto add = [&](const std::array<cplx, 2>& p) {
    out[0] += p[0];
    out[1] += p[1];
  };
  if (lo < lo_) add(tail_integral(lo, std::min(hi, lo_)));
  if (hi > hi_) add(tail_integral(std::max(lo, hi_), hi));
  const double ilo = std::max(lo, lo_), ihi = std::min(hi, hi_);
  if (a_ > 0.0 && ilo < ihi) {
    const double iu = primitive(ihi, false) - primitive(ilo, false);
    const double iv = primitive(ihi, true) - primitive(ilo, true);
    add({c1u_ * iu + c1v_ * iv, c2u_ * iu + c2v_ * iv});
  }
  return out;
}

ScatteringData scattering_coeffs(const Potential& q, double omega, const ScatteringOptions& opts) {
  return ScatteringSolver(q, omega, opts).solve(omega).data();
}

std::array<cplx, 2> scattering_solution(const Potential& q, double omega, double x, const ScatteringOptions& opts) {
  return ScatteringSolver(q, omega, opts).solve(omega).value(x);
}

void write_scattering_csv(std::ostream& os, const std::vector<ScatteringData>& rows) {
  os << "omega,re_T,im_T,re_R1,im_R1,re_R2,im_R2,unitarity_defect\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.omega, r.T.real(),
                  r.T.imag(), r.R1.real(), r.R1.imag(), r.R2.real(), r.R2.imag(), r.unitarity_defect());
    os << buf;
  }
}

}  // namespace varband
