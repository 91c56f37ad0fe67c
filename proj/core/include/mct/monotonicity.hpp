#pragma once

#include <vector>

#include "mct/grid.hpp"
#include "mct/measures.hpp"

namespace mct {

/// Radial cutoff: 1 on [0, 1/4], 0 on [1/2, inf), 1 - S(4r - 1) in between
/// with S(t) = 6t^5 - 15t^4 + 10t^3.
double cutoff_eta(double r);

/// Pole (y, s) of the truncated backward heat kernel.
struct KernelSpec {
  Point y{};
  double s = 0.0;
  int dim = 2;
};

/// (4 pi (s - t))^{-(n-1)/2} exp(-|x - y|^2 / (4 (s - t))) eta(|x - y|) with
/// the minimal-image distance. Throws PoleInPast for t >= s.
double kernel_eval(const KernelSpec& k, const Point& x, double t);

/// int rho e dx.
double monotonicity_functional(const MeasureField& m, const KernelSpec& k, double t);

/// Everything the audit needs from one snapshot.
struct MonotonicitySample {
  double t = 0.0;
  double value = 0.0;         // int rho dmu
  double discrepancy = 0.0;   // (2 (s - t))^{-1} int |xi| rho dx
  double transport = 0.0;     // 1/2 int rho |u|^2 dmu
  double density = 1.0;       // D(t) used by the tail term
};

MonotonicitySample sample_monotonicity(const MeasureField& m, const KernelSpec& k, double t,
                                       const VectorField* u = nullptr, double density = 1.0);

struct AuditRecord {
  double t0 = 0.0, t1 = 0.0;
  double delta_m = 0.0;
  double discrepancy_term = 0.0;
  double transport_term = 0.0;
  double tail_term = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<MonotonicitySample> samples;  // those inside [t0, t1]
};

/// Delta M = M(t1) - M(t0) against transport + tail + tolerance, with the time
/// integrals by the trapezoid rule over the samples in [t0, t1]. The tail is
/// C exp(-1 / (128 (s - t0))) (t1 - t0) max D. Throws InsufficientSnapshots for
/// fewer than 4 samples in the window.
AuditRecord monotonicity_audit(const std::vector<MonotonicitySample>& samples, const KernelSpec& k, double t0,
                               double t1, double tolerance = 2e-3, double tail_constant = 1.0);

}  // namespace mct
