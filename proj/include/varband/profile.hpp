#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "varband/sample_set.hpp"

namespace varband {

struct Interval {
  double a = 0.0;
  double b = 0.0;

  Interval() = default;
  Interval(double lo, double hi);
  double length() const { return b - a; }
  bool contains(double x) const { return x >= a && x <= b; }
};

struct PiecewiseConstant {
  std::vector<double> breakpoints;
  std::vector<double> values;  // one more than breakpoints
};

struct SmoothEventuallyConstant {
  std::function<double(double)> p;
  std::function<double(double)> dp;
  std::function<double(double)> d2p;
  double radius = 1.0;  // p is constant outside [-radius, radius]
  double p_minus = 1.0;
  double p_plus = 1.0;
};

enum class BlendKind { cubic, quintic };

// The function p of A_p f = -(p f')'. Immutable and cheap to copy.
class BandwidthProfile {
 public:
  static BandwidthProfile constant(double value);
  static BandwidthProfile piecewise(std::vector<double> breakpoints, std::vector<double> values);
  // p = p_minus on x <= 0 and p_plus on x > 0.
  static BandwidthProfile toy(double p_minus, double p_plus);
  // Checks the supplied derivatives against central differences.
  static BandwidthProfile smooth(SmoothEventuallyConstant spec);
  // Smoothstep from p_minus to p_plus across [-radius, radius].
  static BandwidthProfile blend(double p_minus, double p_plus, double radius,
                                BlendKind kind = BlendKind::cubic);

  bool is_piecewise() const;
  bool is_smooth() const { return !is_piecewise(); }
  const PiecewiseConstant& piecewise_data() const;
  const SmoothEventuallyConstant& smooth_data() const;

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  double lower_bound() const;
  double upper_bound() const;
  double p_minus() const;
  double p_plus() const;
  // Region outside of which p is constant.
  Interval transition() const;
  // Breakpoints, or the two ends of the transition for smooth profiles.
  std::vector<double> knots() const;
  bool positive() const;
  std::string describe() const;

  double zeta(double x) const;
  double zeta_inv(double y) const;
  double eta(double x) const;
  double eta_inv(double y) const;
  // Integral of p^{-1/2} (or 1/p) over [a, b], a <= b.
  double mu(double a, double b) const;
  double eta_measure(double a, double b) const;

  struct Impl;

 private:
  explicit BandwidthProfile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

double eval_p(const BandwidthProfile& profile, double x);
double mu_p(const BandwidthProfile& profile, const Interval& I);
double zeta(const BandwidthProfile& profile, double x);
double zeta_inv(const BandwidthProfile& profile, double y);
double eta(const BandwidthProfile& profile, double x);
double eta_inv(const BandwidthProfile& profile, double y);

// q at the warped point zeta(x): p''/4 - p'^2/(16 p).
double potential_q(const BandwidthProfile& profile, double x);

// Essential infimum of p over the open gap (a, b).
double gap_essinf_p(const BandwidthProfile& profile, double a, double b);

// Per-gap ratios (x_{i+1} - x_i) / ess inf sqrt(p).
std::vector<double> gap_ratios(const BandwidthProfile& profile, const SampleSet& X);
double max_gap_delta(const BandwidthProfile& profile, const SampleSet& X);

struct AdmissibilityReport {
  bool pass = true;
  std::vector<std::string> reasons;
  double lower = 0.0;
  double upper = 0.0;
};

AdmissibilityReport admissibility_check(const BandwidthProfile& profile);

}  // namespace varband
