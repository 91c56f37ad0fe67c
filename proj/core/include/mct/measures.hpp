#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mct/grid.hpp"
#include "mct/potential.hpp"

namespace mct {

/// Cell-wise e = eps |grad phi|^2 / 2 + W(phi) / eps and
/// xi = eps |grad phi|^2 / 2 - W(phi) / eps. |grad phi|^2 is the mean of the
/// squared forward and backward differences, so the total of e is exactly the
/// discrete energy whose gradient the solver follows.
struct MeasureField {
  ScalarField phi;
  ScalarField e;
  ScalarField xi;
  ScalarField grad_sq;  // |grad phi|^2
  double epsilon = 0.0;

  const PeriodicGrid& grid() const { return e.grid(); }
  /// mu(Omega).
  double total() const { return e.integral(); }
};

MeasureField energy_and_discrepancy(const PhaseField& phi, const DoubleWell& well);

/// mu(Omega) without keeping the fields.
double total_energy(const PhaseField& phi, const DoubleWell& well);

/// Volume of the unit ball in R^m (omega_1 = 2, omega_2 = pi, omega_3 = 4 pi / 3).
double unit_ball_volume(int m);

/// mu(B_r(center)) by cell-center inclusion.
double ball_measure(const MeasureField& m, const Point& center, double r);

struct RatioSample {
  Point center{};
  double radius = 0.0;
  double ratio = 0.0;
};

struct DensityReport {
  double total = 0.0;
  double d_of_t = 1.0;
  Point argmax_center{};
  double argmax_radius = 0.0;
  double argmax_ratio = 0.0;
  std::vector<RatioSample> ratio_samples;  // best radius per center
};

struct DensityOptions {
  std::vector<double> radii;  // empty selects {5, 10, 20} eps and {0.1, 0.2}
  std::vector<Point> extra_centers;    // probed in addition to the band and random cells
  std::vector<double> extra_radii;     // additional radii tried at extra_centers only
  int random_centers = 100;
  std::uint64_t seed = 20240601;
  std::size_t max_centers = 20000;
};

/// D(t) = max{1, mu(Omega), sup mu(B_r) / (omega_{n-1} r^{n-1})} over cells
/// within 2 eps of the interface (|phi| < Psi(2)) plus seeded random cells.
/// Explicit radii must lie in [4h, 1/2]; defaults outside are dropped. Extra
/// centers snap to their containing cell.
/// In dim 1 only the total mass enters.
DensityReport density_ratio(const MeasureField& m, const Profile& profile, const DensityOptions& opts = {});

struct DiscrepancyBound {
  double sup_value = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

/// sup (xi)_+ against 10 eps^{-beta}.
DiscrepancyBound positive_discrepancy_bound(const MeasureField& m, double beta);

/// int |xi| dx.
double discrepancy_l1(const MeasureField& m);

struct BvProjection {
  ScalarField w;
  double total_variation = 0.0;
};

/// w = Phi(phi); |grad w| = Phi'(phi) |grad phi| cell-wise with the same
/// gradient magnitude as e, so TV <= mu(Omega) / sigma holds cell by cell.
BvProjection bv_projection(const PhaseField& phi, const Profile& profile);

/// h_eps = Lap phi - W'(phi) / eps^2.
ScalarField mean_curvature_term(const PhaseField& phi, const DoubleWell& well);

enum class TestFunction { One, CosX };

TestFunction test_function_by_name(const std::string& name);
std::string to_string(TestFunction f);
double test_value(TestFunction f, const Point& x);
Point test_gradient(TestFunction f, const Point& x);

/// mu(test) = int test e dx.
double weighted_measure(const MeasureField& m, TestFunction f);

struct BrakkeResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs| / mu(Omega)
};

/// Discrete-time check of
///   d/dt mu(test) = int -eps test h^2 - eps h grad test . grad phi
///                   + eps test h (u . grad phi) + eps (grad phi . grad test)(u . grad phi)
/// with the left side a difference quotient over [before, after] and the right
/// side at `before` (u sampled at the half step, central grad phi).
BrakkeResidual brakke_residual(const PhaseField& before, const PhaseField& after, double dt,
                               const DoubleWell& well, const VectorField* u, TestFunction f);

}  // namespace mct
