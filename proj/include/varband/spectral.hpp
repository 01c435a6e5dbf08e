#pragma once

#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "varband/numerics.hpp"
#include "varband/profile.hpp"
#include "varband/schrodinger.hpp"

namespace varband {

// Finite union of disjoint closed intervals of [0, inf) in the lambda variable.
class SpectralSet {
 public:
  explicit SpectralSet(std::vector<Interval> intervals);
  static SpectralSet band(double omega_top);

  const std::vector<Interval>& intervals() const { return intervals_; }
  // Components of Lambda^{1/2} = {w >= 0 : w^2 in Lambda}.
  std::vector<Interval> sqrt_intervals() const;
  double sqrt_measure() const;
  double bandwidth() const { return intervals_.back().b; }
  double shortest_sqrt_component() const;
  bool contains(double lambda) const;

 private:
  std::vector<Interval> intervals_;
};

// Nodes and weights on Lambda^{1/2}; nodes never touch w = 0.
class SpectralQuadrature {
 public:
  // Composite Gauss-Legendre, panel width <= pi/(8 x_max).
  static SpectralQuadrature gauss(const SpectralSet& set, double x_max, int order = 10);
  // Midpoint rule with spacing close to the given value on every component.
  static SpectralQuadrature midpoint(const SpectralSet& set, double spacing, bool round_down = false);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  int order() const { return order_; }
  // Largest panel width (Gauss) or node spacing (midpoint).
  double spacing() const { return spacing_; }
  // Largest |x| this grid resolves under the pi/(4 X) spacing rule.
  double resolved_x_max() const { return kPi / (4.0 * spacing_); }
  // Index of the Lambda^{1/2} component holding node l, and the components.
  std::size_t component(std::size_t l) const { return component_[l]; }
  const std::vector<Interval>& components() const { return components_; }

 private:
  std::vector<double> nodes_;
  std::vector<std::size_t> component_;
  std::vector<Interval> components_;
  std::vector<double> weights_;
  int order_ = 1;
  double spacing_ = 0.0;
};

// Discretized spectral representation. Coefficient vectors have two entries
// per node, index 2l + j for component j of Phi(w_l, .). Conventions:
//   f(x)      = sigma * sum m F Phi(x)
//   F         = sigma * int f conj(Phi)
//   k(x, y)   = sigma^2 * sum m Phi(x) conj(Phi(y))
//   ||f||^2   = sum m |F|^2
class SpectralModel {
 public:
  SpectralModel(SpectralSet set, SpectralQuadrature quad, double sigma);
  virtual ~SpectralModel() = default;
  SpectralModel(const SpectralModel&) = delete;
  SpectralModel& operator=(const SpectralModel&) = delete;

  const SpectralSet& spectral_set() const { return set_; }
  const SpectralQuadrature& quadrature() const { return quad_; }
  std::size_t nodes() const { return quad_.size(); }
  std::size_t dim() const { return 2 * quad_.size(); }
  double sigma() const { return sigma_; }
  const std::vector<double>& weights() const { return m_; }
  double omega(std::size_t l) const { return quad_.nodes()[l]; }
  double lambda(std::size_t l) const { return omega(l) * omega(l); }

  virtual std::string kind() const = 0;
  // Phi_j(w_l, x) into out[2l + j].
  virtual void basis(double x, cplx* out) const = 0;
  // Integral of Phi_j(w_l, .) over [lo, hi] into out[2l + j].
  virtual void basis_integral(double lo, double hi, cplx* out) const = 0;
  // Outside [-r, r] in x every basis function has its asymptotic form.
  virtual double core_radius() const = 0;
  // Smallest value of p, which sets the shortest spatial wavelength.
  virtual double p_min() const { return 1.0; }
  // Map to the coordinate in which lengths count like free-space lengths.
  virtual double warp(double x) const { return x; }
  virtual double warp_inv(double s) const { return s; }
  // Same operator and spectral set on another quadrature grid.
  virtual std::shared_ptr<const SpectralModel> with_quadrature(SpectralQuadrature quad) const = 0;

  std::vector<cplx> basis(double x) const;
  // Window [-L, L] in warped coordinates with L = core + 40/(shortest component
  // of Lambda^{1/2}), mapped back to x.
  Interval default_window() const;

 protected:
  std::vector<double> m_;

 private:
  SpectralSet set_;
  SpectralQuadrature quad_;
  double sigma_;
};

using ModelPtr = std::shared_ptr<const SpectralModel>;

// Toy profile p = p- (x <= 0), p+ (x > 0), basis (phi_+, phi_-), toy measure.
class ToySpectralModel final : public SpectralModel {
 public:
  ToySpectralModel(double p_minus, double p_plus, SpectralSet set, SpectralQuadrature quad);
  std::string kind() const override { return "toy"; }
  void basis(double x, cplx* out) const override;
  void basis_integral(double lo, double hi, cplx* out) const override;
  double core_radius() const override { return 0.0; }
  double p_min() const override { return std::min(pm_, pp_); }
  double warp(double x) const override;
  double warp_inv(double s) const override;
  std::shared_ptr<const SpectralModel> with_quadrature(SpectralQuadrature quad) const override;
  double p_minus() const { return pm_; }
  double p_plus() const { return pp_; }

 private:
  double pm_, pp_;
};

// B_q = -D^2 + q with Lebesgue spectral measure (2 pi)^{-1} I_2 dw.
class SchrodingerSpectralModel final : public SpectralModel {
 public:
  SchrodingerSpectralModel(Potential q, SpectralSet set, SpectralQuadrature quad, ScatteringOptions opts = {});
  std::string kind() const override { return q_.is_zero() ? "free" : "schrodinger"; }
  void basis(double x, cplx* out) const override;
  void basis_integral(double lo, double hi, cplx* out) const override;
  double core_radius() const override { return q_.radius(); }
  std::shared_ptr<const SpectralModel> with_quadrature(SpectralQuadrature quad) const override;
  const Potential& potential() const { return q_; }
  const ScatteringSolution& solution(std::size_t l) const { return sols_[l]; }
  const ScatteringData& data(std::size_t l) const { return sols_[l].data(); }

 private:
  Potential q_;
  ScatteringOptions opts_;
  std::vector<ScatteringSolution> sols_;
};

// Pullback of the Schrodinger model of q = potential_q(p):
// Phi(x) = p(x)^{-1/4} Phi_q(zeta(x)).
class LiouvilleSpectralModel final : public SpectralModel {
 public:
  LiouvilleSpectralModel(BandwidthProfile profile, SpectralSet set, SpectralQuadrature quad,
                         ScatteringOptions opts = {});
  std::string kind() const override { return "liouville"; }
  void basis(double x, cplx* out) const override;
  void basis_integral(double lo, double hi, cplx* out) const override;
  double core_radius() const override;
  double p_min() const override { return profile_.lower_bound(); }
  double warp(double x) const override { return profile_.zeta(x); }
  double warp_inv(double s) const override { return profile_.zeta_inv(s); }
  std::shared_ptr<const SpectralModel> with_quadrature(SpectralQuadrature quad) const override;
  const BandwidthProfile& profile() const { return profile_; }
  const SchrodingerSpectralModel& inner() const { return *inner_; }

 private:
  BandwidthProfile profile_;
  ScatteringOptions opts_;
  std::shared_ptr<const SchrodingerSpectralModel> inner_;
};

// Limit p- -> inf of the toy model: Phi = (sin(w x) 1_{x >= 0}, 0), measure (2/pi) dw.
class HalfLineSpectralModel final : public SpectralModel {
 public:
  HalfLineSpectralModel(SpectralSet set, SpectralQuadrature quad);
  std::string kind() const override { return "halfline"; }
  void basis(double x, cplx* out) const override;
  void basis_integral(double lo, double hi, cplx* out) const override;
  double core_radius() const override { return 0.0; }
  std::shared_ptr<const SpectralModel> with_quadrature(SpectralQuadrature quad) const override;
};

std::shared_ptr<ToySpectralModel> make_toy_model(double p_minus, double p_plus, const SpectralSet& set,
                                                 double x_max, int order = 10);
std::shared_ptr<SchrodingerSpectralModel> make_free_model(const SpectralSet& set, double x_max, int order = 10);
std::shared_ptr<SchrodingerSpectralModel> make_schrodinger_model(const Potential& q, const SpectralSet& set,
                                                                 double x_max, int order = 10);
// x_max is measured in the original x variable.
std::shared_ptr<LiouvilleSpectralModel> make_liouville_model(const BandwidthProfile& profile, const SpectralSet& set,
                                                             double x_max, int order = 10);
std::shared_ptr<HalfLineSpectralModel> make_halfline_model(double omega_top, double x_max, int order = 10);

struct TransformOptions {
  double tail_tolerance = 1e-6;
  int order = 12;
};

// F = sigma * int_window f conj(Phi); throws TruncationError when the outer
// 5% of the window carries more than tail_tolerance of the L2 mass.
std::vector<cplx> spectral_transform(const SpectralModel& model, const std::function<cplx(double)>& f,
                                     const Interval& window, const TransformOptions& opts = {});

// Composite Gauss-Legendre grid on a window fine enough for products of two
// band-limited functions of the model.
QuadRule spatial_rule(const SpectralModel& model, const Interval& window, int order = 12);

// Smooth random spectrum: per component of Lambda^{1/2},
// sin^taper(pi u) * sum_{k < modes} g_k cos(k pi u), g_k standard complex Gaussian;
// normalized to unit norm. Spatial decay is |x|^{-1-taper}.
std::vector<cplx> random_coefficients(const SpectralModel& model, std::mt19937_64& rng, int modes = 6, int taper = 2);

}  // namespace varband
