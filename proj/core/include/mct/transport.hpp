#pragma once

#include <array>
#include <string>
#include <vector>

#include "mct/grid.hpp"

namespace mct {

using Jacobian = std::array<std::array<double, 3>, 3>;  // J[i][j] = d u_i / d x_j

enum class TransportKind { Zero, Constant, Shear, Rotation, RoughRadial, Sampled };

std::string to_string(TransportKind k);

/// Integrability exponents (p, q) admissible in dimension n:
/// 2 < q < inf, n q / (2 (q - 1)) < p, and p >= 4/3 when n = 2.
bool pq_admissible(double p, double q, int n);

/// Time-Hoelder exponent of the transport contribution:
/// (2pq - 2p - nq) / (pq) for p < n, (q - 2) / q for p > n.
double p_hat(double p, double q, int n);

/// Transport field u(x, t) on the torus.
///
/// Analytic kinds are time-independent:
///   constant     u = U
///   shear        u = (A sin(2 pi x_2), 0, ...)
///   rotation     u = omega chi(rho) (-(x_2 - c_2), x_1 - c_1, 0), rho = |x - c|
///   rough_radial u = A rho^{1/2} (x - c)/rho chi(rho)
/// where chi = 1 for rho <= 0.3 and decays smoothly to 0 at rho = 0.45, so the
/// field is continuous across the wrap seam. Sampled fields interpolate
/// linearly between time knots.
class TransportSpec {
 public:
  static TransportSpec zero(int dim);
  static TransportSpec constant(int dim, const Point& U);
  static TransportSpec shear(int dim, double amplitude);
  static TransportSpec rotation(int dim, double omega, const Point& center);
  static TransportSpec rough_radial(int dim, double amplitude, const Point& center);
  static TransportSpec sampled(std::vector<double> times, std::vector<VectorField> fields);

  TransportKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double p() const { return p_; }
  double q() const { return q_; }
  /// Sets (p, q); throws InvalidTransport unless admissible for this dimension.
  TransportSpec& with_exponents(double p, double q);

  bool is_zero() const { return kind_ == TransportKind::Zero; }
  bool steady() const { return kind_ != TransportKind::Sampled || times_.size() == 1; }

  Point value(const Point& x, double t) const;
  /// Analytic Jacobian; sampled fields use central differences of the knots.
  Jacobian jacobian(const Point& x, double t) const;

  /// Samples u(., t) at cell centers.
  VectorField sample(const PeriodicGrid& grid, double t) const;

  const std::vector<double>& knot_times() const { return times_; }

 private:
  TransportKind kind_ = TransportKind::Zero;
  int dim_ = 2;
  double p_ = 4.0, q_ = 4.0;
  Point vec_{0.0, 0.0, 0.0};  // U for constant, center otherwise
  double amp_ = 0.0;
  std::vector<double> times_;
  std::vector<VectorField> fields_;
  std::vector<VectorField> grads_;  // per knot: dim*dim central-difference components

  VectorField interpolate(double t) const;
};

/// ( int_0^T ( int |u|^p + |grad u|^p dx )^{q/p} dt )^{1/q}, cell-center
/// quadrature in space, 64 midpoint slices in time (knots for sampled fields).
double sobolev_norm(const TransportSpec& u, double T, const PeriodicGrid& grid);

/// u convolved with a periodic Gaussian of standard deviation
/// max(h, eps^{1 + beta}), sampled on the grid at the knots of u (a single
/// knot for steady fields). Construction verifies
///   sup |u_eps| <= eps^{-beta},  sup |grad u_eps| <= eps^{-(beta + 1)}
/// and throws SupBoundViolated otherwise.
class MollifiedTransport {
 public:
  MollifiedTransport() = default;

  double epsilon() const { return epsilon_; }
  double beta() const { return beta_; }
  double kernel_std() const { return std_; }
  bool is_zero() const { return zero_; }
  bool steady() const { return fields_.size() <= 1; }
  const PeriodicGrid& grid() const { return grid_; }

  /// u_eps(., t); linear interpolation between knots, clamped at the ends.
  VectorField at(double t) const;
  /// Reference to the single field of a steady transport.
  const VectorField& steady_field() const { return fields_.front(); }

  double sup_norm() const { return sup_u_; }
  double sup_gradient() const { return sup_grad_; }

 private:
  friend MollifiedTransport mollify(const TransportSpec&, double, const PeriodicGrid&, double, double);

  PeriodicGrid grid_;
  double epsilon_ = 0.0, beta_ = 0.25, std_ = 0.0;
  bool zero_ = true;
  std::vector<double> times_;
  std::vector<VectorField> fields_;
  double sup_u_ = 0.0, sup_grad_ = 0.0;
};

MollifiedTransport mollify(const TransportSpec& u, double epsilon, const PeriodicGrid& grid, double T,
                           double beta = 0.25);

/// Separable periodic Gaussian blur of a scalar field, truncated at 5 std.
ScalarField gaussian_blur(const ScalarField& f, double std_dev);

}  // namespace mct
