#include "mct/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mct/detail/stencil.hpp"
#include "mct/errors.hpp"
#include "mct/parallel.hpp"

namespace mct {

namespace {

constexpr double kMaxPrincipleSlack = 1e-6;
constexpr double kCgTolerance = 1e-12;
constexpr int kCgMaxIterations = 500;

// Constant-coefficient periodic tridiagonal solve of
// (1 + 2 lam) x_i - lam x_{i-1} - lam x_{i+1} = d_i (Sherman-Morrison).
class CyclicLineSolver {
 public:
  CyclicLineSolver(int n, double lam) : n_(n), lam_(lam), cp_(n), inv_den_(n), z_(n) {
    const double b = 1.0 + 2.0 * lam, a = -lam, c = -lam;
    gamma_ = -b;
    alpha_ = a;  // A[n-1][0]
    beta_ = c;   // A[0][n-1]
    auto diag = [&](int i) {
      if (i == 0) return b - gamma_;
      if (i == n - 1) return b - alpha_ * beta_ / gamma_;
      return b;
    };
    double den = diag(0);
    inv_den_[0] = 1.0 / den;
    cp_[0] = c * inv_den_[0];
    for (int i = 1; i < n; ++i) {
      den = diag(i) - a * cp_[i - 1];
      inv_den_[i] = 1.0 / den;
      cp_[i] = c * inv_den_[i];
    }
    std::vector<double> u(n, 0.0);
    u[0] = gamma_;
    u[n - 1] = alpha_;
    z_ = u;
    thomas(z_.data());
    fact_den_ = 1.0 + z_[0] + beta_ * z_[n - 1] / gamma_;
  }

  void solve(double* x) const {
    thomas(x);
    const double f = (x[0] + beta_ * x[n_ - 1] / gamma_) / fact_den_;
    for (int i = 0; i < n_; ++i) x[i] -= f * z_[i];
  }

 private:
  void thomas(double* x) const {
    const double a = -lam_;
    x[0] *= inv_den_[0];
    for (int i = 1; i < n_; ++i) x[i] = (x[i] - a * x[i - 1]) * inv_den_[i];
    for (int i = n_ - 2; i >= 0; --i) x[i] -= cp_[i] * x[i + 1];
  }

  int n_;
  double lam_;
  double gamma_ = 0, alpha_ = 0, beta_ = 0, fact_den_ = 1;
  std::vector<double> cp_, inv_den_, z_;
};

// Applies prod_a (I - dt Lap_a)^{-1}; the factors commute on the periodic lattice.
void split_inverse(const PeriodicGrid& g, const CyclicLineSolver& line, ScalarField& f) {
  const std::size_t n = g.resolution();
  const std::size_t lines = g.size() / n;
  for (int a = g.dim() - 1; a >= 0; --a) {
    const std::size_t s = g.stride(a);
    const std::size_t chunk = std::max<std::size_t>(1, kBlockSize / n);
    parallel_blocks(
        lines,
        [&](std::size_t b, std::size_t e) {
          std::vector<double> buf(n);
          for (std::size_t l = b; l < e; ++l) {
            const std::size_t base = (l / s) * (s * n) + (l % s);
            if (s == 1) {
              line.solve(&f[base]);
              continue;
            }
            for (std::size_t j = 0; j < n; ++j) buf[j] = f[base + j * s];
            line.solve(buf.data());
            for (std::size_t j = 0; j < n; ++j) f[base + j * s] = buf[j];
          }
        },
        chunk);
  }
}

// out = x - dt * Lap x
void apply_implicit(const ScalarField& x, double dt, ScalarField& out) {
  const auto& g = x.grid();
  const std::size_t n = g.resolution();
  const int lead = g.dim() - 1;
  const double c = dt / (g.h() * g.h());
  const double diag = 1.0 + 2.0 * g.dim() * c;
  detail::for_each_row(g, [&](std::size_t row) {
    const auto st = detail::row_stencil(g, row);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t i = st.base + j;
      double nb = x[j == 0 ? st.base + n - 1 : i - 1] + x[j + 1 == n ? st.base : i + 1];
      for (int k = 0; k < lead; ++k) nb += x[st.minus[k] + j] + x[st.plus[k] + j];
      out[i] = diag * x[i] - c * nb;
    }
  });
}

double dot(const ScalarField& a, const ScalarField& b) {
  return parallel_sum(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

}  // namespace

double stability_bound(Scheme scheme, const PeriodicGrid& grid, double epsilon, const DoubleWell& well,
                       double sup_u) {
  double b = epsilon * epsilon / well.d2_max();
  if (sup_u > 0.0) b = std::min(b, grid.h() / sup_u);
  if (scheme == Scheme::Explicit) b = std::min(b, grid.h() * grid.h() / (2.0 * grid.dim()));
  return b;
}

double resolve_dt(const SolverConfig& cfg, const PeriodicGrid& grid, double epsilon, const DoubleWell& well,
                  double sup_u) {
  if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0))
    throw Error(ErrorCode::ConfigInvalid, "solver.cfl_safety must lie in (0, 1]");
  const double limit = cfg.cfl_safety * stability_bound(cfg.scheme, grid, epsilon, well, sup_u);
  if (cfg.dt <= 0.0) return limit;
  if (cfg.dt > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "solver.dt = " << cfg.dt << " exceeds cfl_safety * stability bound = " << limit;
    throw Error(ErrorCode::ConfigInvalid, os.str());
  }
  return cfg.dt;
}

ScalarField advection(const ScalarField& phi, const VectorField& u, bool upwind) {
  const auto& g = phi.grid();
  if (u.grid() != g) throw Error(ErrorCode::GridMismatch, "transport and phase field grids differ");
  ScalarField out(g);
  const std::size_t n = g.resolution();
  const int last = g.dim() - 1;
  const double inv = 1.0 / g.h();
  detail::for_each_row(g, [&](std::size_t row) {
    const auto st = detail::row_stencil(g, row);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t i = st.base + j;
      double acc = 0.0;
      for (int a = 0; a <= last; ++a) {
        std::size_t m, p;
        if (a == last) {
          m = j == 0 ? st.base + n - 1 : i - 1;
          p = j + 1 == n ? st.base : i + 1;
        } else {
          m = st.minus[a] + j;
          p = st.plus[a] + j;
        }
        const double ua = u[a][i];
        double d;
        if (!upwind) {
          d = 0.5 * (phi[p] - phi[m]) * inv;
        } else {
          d = ua > 0.0 ? (phi[i] - phi[m]) * inv : (phi[p] - phi[i]) * inv;
        }
        acc += ua * d;
      }
      out[i] = acc;
    }
  });
  return out;
}

ScalarField well_derivative(const ScalarField& phi, const DoubleWell& well) {
  ScalarField out(phi.grid());
  const double c = well.quartic_scale();
  parallel_blocks(phi.size(), [&](std::size_t b, std::size_t e) {
    if (c > 0.0) {
      for (std::size_t i = b; i < e; ++i) out[i] = 4.0 * c * phi[i] * (phi[i] * phi[i] - 1.0);
    } else {
      for (std::size_t i = b; i < e; ++i) out[i] = well.d1(phi[i]);
    }
  });
  return out;
}

ScalarField rhs(const PhaseField& phi, const DoubleWell& well, const VectorField* u, bool upwind) {
  ScalarField out = laplacian(phi.phi);
  const ScalarField wp = well_derivative(phi.phi, well);
  const double k = 1.0 / (phi.epsilon * phi.epsilon);
  if (u != nullptr) {
    const ScalarField adv = advection(phi.phi, *u, upwind);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= k * wp[i] + adv[i];
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= k * wp[i];
  }
  return out;
}

ScalarField rhs(const PhaseField& phi, const DoubleWell& well, const MollifiedTransport& u, double t, bool upwind) {
  if (u.is_zero()) return rhs(phi, well, nullptr, upwind);
  if (u.grid() != phi.phi.grid()) throw Error(ErrorCode::GridMismatch, "transport and phase field grids differ");
  if (u.steady()) return rhs(phi, well, &u.steady_field(), upwind);
  const VectorField v = u.at(t);
  return rhs(phi, well, &v, upwind);
}

namespace {

// phi + dt (Lap phi - k W'(phi) - adv) in one pass over the rows.
ScalarField explicit_update(const ScalarField& phi, const DoubleWell& well, const ScalarField* adv, double k,
                            double dt) {
  const auto& g = phi.grid();
  ScalarField out(g);
  const std::size_t n = g.resolution();
  const int last = g.dim() - 1;
  const double inv = 1.0 / (g.h() * g.h());
  const double c = well.quartic_scale();
  detail::for_each_row(g, [&](std::size_t row) {
    const auto st = detail::row_stencil(g, row);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t i = st.base + j;
      const double f = phi[i];
      double lap = 0.0;
      for (int a = 0; a < last; ++a) lap += (phi[st.plus[a] + j] - 2.0 * f + phi[st.minus[a] + j]) * inv;
      const double fm = phi[j == 0 ? st.base + n - 1 : i - 1];
      const double fp = phi[j + 1 == n ? st.base : i + 1];
      lap += (fp - 2.0 * f + fm) * inv;
      const double wp = c > 0.0 ? 4.0 * c * f * (f * f - 1.0) : well.d1(f);
      out[i] = f + dt * (lap - k * wp - (adv ? (*adv)[i] : 0.0));
    }
  });
  return out;
}

}  // namespace

Stepper::Stepper(const DoubleWell& well, const MollifiedTransport& transport, SolverConfig cfg)
    : well_(&well), transport_(&transport), cfg_(cfg) {}

FlowState Stepper::step(const FlowState& s, double dt, StepInfo* info) const {
  const auto& g = s.field.phi.grid();
  const double eps = s.field.epsilon;
  const ScalarField& phi = s.field.phi;
  const double k = 1.0 / (eps * eps);

  ScalarField adv;
  bool have_adv = false;
  if (!transport_->is_zero()) {
    if (transport_->grid() != g) throw Error(ErrorCode::GridMismatch, "transport and phase field grids differ");
    if (transport_->steady()) {
      adv = advection(phi, transport_->steady_field(), cfg_.upwind);
    } else {
      adv = advection(phi, transport_->at(s.t + 0.5 * dt), cfg_.upwind);
    }
    have_adv = true;
  }
  FlowState next;
  next.field.epsilon = eps;
  next.t = s.t + dt;
  next.step_count = s.step_count + 1;
  int iterations = 0;

  if (cfg_.scheme == Scheme::Explicit) {
    next.field.phi = explicit_update(phi, *well_, have_adv ? &adv : nullptr, k, dt);
  } else {
    const ScalarField wp = well_derivative(phi, *well_);
    ScalarField b(g);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = phi[i] - dt * (k * wp[i] + (have_adv ? adv[i] : 0.0));
    const CyclicLineSolver line(g.resolution(), dt / (g.h() * g.h()));
    // start from b plus one preconditioned correction; constant states stay exact
    ScalarField x = b, r(g), Ap(g);
    apply_implicit(b, dt, Ap);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - Ap[i];
    split_inverse(g, line, r);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += r[i];
    apply_implicit(x, dt, Ap);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - Ap[i];
    const double bnorm = std::sqrt(dot(b, b));
    double rnorm = std::sqrt(dot(r, r));
    if (rnorm > kCgTolerance * bnorm) {
      ScalarField z = r;
      split_inverse(g, line, z);
      ScalarField p = z;
      double rz = dot(r, z);
      while (rnorm > kCgTolerance * bnorm) {
        if (++iterations > kCgMaxIterations)
          throw Error(ErrorCode::StabilityViolation, "implicit diffusion solve did not converge");
        apply_implicit(p, dt, Ap);
        const double alpha = rz / dot(p, Ap);
        for (std::size_t i = 0; i < x.size(); ++i) {
          x[i] += alpha * p[i];
          r[i] -= alpha * Ap[i];
        }
        rnorm = std::sqrt(dot(r, r));
        if (rnorm <= kCgTolerance * bnorm) break;
        z = r;
        split_inverse(g, line, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
      }
    }
    next.field.phi = std::move(x);
  }

  const double sup = next.field.phi.max_abs();
  if (!(sup <= 1.0 + kMaxPrincipleSlack)) {
    std::ostringstream os;
    os.precision(17);
    os << "max|phi| = " << sup << " at t = " << next.t;
    throw Error(ErrorCode::StabilityViolation, os.str());
  }
  if (info) {
    info->dt = dt;
    info->cg_iterations = iterations;
    info->advection_energy =
        have_adv ? eps * dt * g.cell_volume() * parallel_sum(adv.size(), [&](std::size_t i) { return adv[i] * adv[i]; })
                 : 0.0;
  }
  return next;
}

std::vector<FlowState> run(const FlowState& initial, const DoubleWell& well, const MollifiedTransport& transport,
                           const SolverConfig& cfg, const std::vector<double>& snapshot_times,
                           const StepObserver& observer) {
  const auto& g = initial.field.phi.grid();
  const double dt = resolve_dt(cfg, g, initial.field.epsilon, well, transport.sup_norm());
  std::vector<double> targets;
  for (double t : snapshot_times)
    if (t > initial.t && t < cfg.t_end) targets.push_back(t);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  if (cfg.t_end > initial.t) targets.push_back(cfg.t_end);

  const Stepper stepper(well, transport, cfg);
  std::vector<FlowState> out{initial};
  FlowState cur = initial;
  for (double target : targets) {
    while (cur.t < target) {
      const double remaining = target - cur.t;
      const bool last = remaining <= dt * (1.0 + 1e-9);
      StepInfo info;
      FlowState next = stepper.step(cur, last ? remaining : dt, &info);
      if (last) next.t = target;
      if (observer) observer(cur, next, info);
      cur = std::move(next);
    }
    out.push_back(cur);
  }
  return out;
}

}  // namespace mct
