#pragma once

#include <array>
#include <string>
#include <vector>

#include "mct/grid.hpp"
#include "mct/measures.hpp"

namespace mct {

/// Zero level set of a phase field. Vertices lie on lattice edges between cell
/// centers of opposite sign (linear interpolation) and are wrapped into [0, 1).
struct InterfaceMesh {
  int dim = 2;
  std::vector<Point> vertices;
  std::vector<std::array<std::size_t, 2>> segments;   // dim 2
  std::vector<std::array<std::size_t, 3>> triangles;  // dim 3
  /// dim 2: ordered closed vertex loops. dim 3: vertex sets of connected patches.
  std::vector<std::vector<std::size_t>> components;
  double measure = 0.0;  // total length (dim 2) or area (dim 3)
};

/// Marching squares (dim 2, saddles resolved by the cell average) or marching
/// cubes (dim 3). Node values that are exactly 0 count as +1e-12. Throws
/// NoInterface when phi has one sign and InvalidGeometry if a dim-2 vertex
/// does not have degree 2.
InterfaceMesh extract_interface(const ScalarField& phi);

struct CircleFit {
  Point center{};
  double radius = 0.0;
  double rms_residual = 0.0;
};

/// Least-squares circle through the single loop (algebraic fit refined by
/// Gauss-Newton on the geometric residual), unwrapped along the loop.
/// Throws MultipleLoops unless exactly one loop exists.
CircleFit fit_circle(const InterfaceMesh& mesh);

/// Least-squares sphere through all vertices (dim 3), unwrapped around the
/// circular mean.
CircleFit fit_sphere(const InterfaceMesh& mesh);

/// Circular mean of each component's vertices along `axis` (sheet positions of
/// slab-like interfaces).
std::vector<double> component_positions(const InterfaceMesh& mesh, int axis);

struct DensityEstimate {
  Point center{};
  double radius = 0.0;
  double theta_hat = 0.0;
  int nearest_integer = 0;
  double deviation = 0.0;
};

/// theta = mu(B_r(center)) / (sigma omega_{n-1} r^{n-1}) for r in [5 eps, 1/4].
DensityEstimate density_estimate(const MeasureField& m, double sigma, const Point& center, double radius);

/// CSV "component,x,y[,z]" of mesh vertices.
void write_interface_csv(const std::string& path, const InterfaceMesh& mesh);

}  // namespace mct
