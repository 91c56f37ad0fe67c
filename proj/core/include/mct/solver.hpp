#pragma once

#include <functional>
#include <vector>

#include "mct/grid.hpp"
#include "mct/potential.hpp"
#include "mct/transport.hpp"

namespace mct {

enum class Scheme { Explicit, SemiImplicit };

struct SolverConfig {
  Scheme scheme = Scheme::SemiImplicit;
  double dt = 0.0;  // <= 0 selects cfl_safety times the stability bound
  double t_end = 0.0;
  double cfl_safety = 0.5;
  bool upwind = false;  // first-order upwind advection instead of central
};

struct FlowState {
  PhaseField field;
  double t = 0.0;
  long step_count = 0;
};

/// Stability bound without the safety factor:
///   explicit       min(h^2 / (2 dim), eps^2 / max|W''|, h / max|u|)
///   semi-implicit  min(eps^2 / max|W''|, h / max|u|)
double stability_bound(Scheme scheme, const PeriodicGrid& grid, double epsilon, const DoubleWell& well,
                       double sup_u);

/// The step actually used: cfl_safety * bound for automatic dt, otherwise the
/// configured dt after checking it against cfl_safety * bound (ConfigInvalid).
double resolve_dt(const SolverConfig& cfg, const PeriodicGrid& grid, double epsilon, const DoubleWell& well,
                  double sup_u);

/// u . grad(phi) with central (or first-order upwind) differences.
ScalarField advection(const ScalarField& phi, const VectorField& u, bool upwind = false);

/// W'(phi) cell-wise.
ScalarField well_derivative(const ScalarField& phi, const DoubleWell& well);

/// Delta phi - W'(phi) / eps^2 - u . grad(phi); u may be null for no transport.
ScalarField rhs(const PhaseField& phi, const DoubleWell& well, const VectorField* u, bool upwind = false);
ScalarField rhs(const PhaseField& phi, const DoubleWell& well, const MollifiedTransport& u, double t,
                bool upwind = false);

/// Per-step bookkeeping handed to observers.
struct StepInfo {
  double dt = 0.0;
  /// eps * dt * int (u . grad phi)^2 dx with the advection term of this step.
  double advection_energy = 0.0;
  int cg_iterations = 0;
};

/// Advances the Allen-Cahn equation with transport. Explicit = forward Euler;
/// semi-implicit solves (I - dt Lap) phi' = phi - dt (W'(phi)/eps^2 + u.grad phi)
/// by conjugate gradients preconditioned with the dimensionally split
/// periodic tridiagonal solve. Transport is sampled at t + dt/2.
class Stepper {
 public:
  Stepper(const DoubleWell& well, const MollifiedTransport& transport, SolverConfig cfg);

  /// One step of length dt. Throws StabilityViolation if |phi| exceeds 1 + 1e-6.
  FlowState step(const FlowState& s, double dt, StepInfo* info = nullptr) const;

  const SolverConfig& config() const { return cfg_; }

 private:
  const DoubleWell* well_;
  const MollifiedTransport* transport_;
  SolverConfig cfg_;
};

using StepObserver = std::function<void(const FlowState& before, const FlowState& after, const StepInfo&)>;

/// Steps from `initial` to cfg.t_end, landing exactly on every snapshot time
/// (shortening the step when needed). Returns the initial state plus one
/// state per snapshot time in (t0, t_end]; t_end itself is always included.
std::vector<FlowState> run(const FlowState& initial, const DoubleWell& well, const MollifiedTransport& transport,
                           const SolverConfig& cfg, const std::vector<double>& snapshot_times,
                           const StepObserver& observer = {});

}  // namespace mct
