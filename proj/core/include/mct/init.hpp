#pragma once

#include <string>
#include <vector>

#include "mct/grid.hpp"
#include "mct/potential.hpp"

namespace mct {

enum class GeometryKind { Circle, Sphere, TwoCircles, Annulus, Graph };

std::string to_string(GeometryKind k);

/// Smooth initial region Omega_0 on the torus; phi is positive inside.
///
/// A graph region is the cyclic slab {base < x_1 < g(x_2)} bounded by the flat
/// sheet x_1 = base and the curve x_1 = g(x_2); with constant heights it is a
/// planar slab. In dim 1 it is the interval (base, g).
class InitialGeometry {
 public:
  static InitialGeometry circle(const Point& center, double r0);
  static InitialGeometry sphere(const Point& center, double r0);
  static InitialGeometry two_circles(const Point& c1, double r1, const Point& c2, double r2);
  static InitialGeometry annulus(const Point& center, double r_in, double r_out);
  /// Heights g(y_j) at y_j = j / N, interpolated by a periodic cubic spline.
  static InitialGeometry graph(int dim, double base, std::vector<double> heights);

  GeometryKind kind() const { return kind_; }
  /// Dimension the geometry lives in.
  int dim() const { return dim_; }

  /// Signed distance (positive inside) in the minimal-image metric.
  double signed_distance(const Point& x) const;
  /// Distance from the boundary to the torus medial axis of both sides.
  double reach() const;
  /// (dim - 1)-measure of the boundary (a point count in dim 1).
  double boundary_measure() const;
  /// Lebesgue measure of Omega_0.
  double volume() const;

  /// Copy with graph heights blurred by a periodic Gaussian of std `scale`
  /// (identity for the closed-form kinds).
  InitialGeometry smoothed(double scale) const;

  double height(double y) const;
  double height_d1(double y) const;
  double height_d2(double y) const;

  const Point& center() const { return c1_; }
  double radius() const { return r1_; }
  const Point& center2() const { return c2_; }
  double radius2() const { return r2_; }
  double base() const { return base_; }
  const std::vector<double>& heights() const { return heights_; }

 private:
  void build_spline();
  double graph_curve_distance(const Point& x) const;

  GeometryKind kind_ = GeometryKind::Circle;
  int dim_ = 2;
  Point c1_{0.5, 0.5, 0.5}, c2_{0.0, 0.0, 0.0};
  double r1_ = 0.25, r2_ = 0.0;  // annulus: r1 = r_in, r2 = r_out
  double base_ = 0.0;
  std::vector<double> heights_;
  std::vector<double> m_;  // spline second derivatives at the nodes
};

/// Monotone odd truncation h with h(d) = d for |d| <= r/3, |h| = r/2 for
/// |d| >= 2r/3 and 0 <= h' <= 1 (quintic smoothstep blend in between).
class Truncation {
 public:
  explicit Truncation(double r) : r_(r) {}
  double r() const { return r_; }
  double operator()(double d) const;
  double slope(double d) const;

 private:
  double r_;
};

/// Psi(h(d(x)) / eps) at every cell center. r_trunc <= 0 selects the geometry
/// reach. Throws EpsilonGridMismatch for eps < 2h and TruncationTooTight for
/// eps > r_trunc / 3.
PhaseField build_initial_field(const InitialGeometry& geometry, const Profile& profile, double epsilon,
                               const PeriodicGrid& grid, double r_trunc = 0.0);

/// Sharp indicator of Omega_0 sampled at cell centers.
ScalarField indicator(const InitialGeometry& geometry, const PeriodicGrid& grid);

}  // namespace mct
