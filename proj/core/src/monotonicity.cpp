#include "mct/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mct/errors.hpp"
#include "mct/parallel.hpp"

namespace mct {

double cutoff_eta(double r) {
  if (r <= 0.25) return 1.0;
  if (r >= 0.5) return 0.0;
  const double t = 4.0 * r - 1.0;
  return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double kernel_eval(const KernelSpec& k, const Point& x, double t) {
  const double tau = k.s - t;
  if (!(tau > 0.0)) throw Error(ErrorCode::PoleInPast, "kernel evaluated at t >= s");
  const double r = periodic_distance(k.y, x, k.dim);
  if (r >= 0.5) return 0.0;
  const double norm = std::pow(4.0 * std::numbers::pi * tau, -0.5 * (k.dim - 1));
  return norm * std::exp(-r * r / (4.0 * tau)) * cutoff_eta(r);
}

double monotonicity_functional(const MeasureField& m, const KernelSpec& k, double t) {
  if (!(k.s - t > 0.0)) throw Error(ErrorCode::PoleInPast, "kernel evaluated at t >= s");
  const auto& g = m.grid();
  return g.cell_volume() * parallel_sum(g.size(), [&](std::size_t i) {
           return m.e[i] == 0.0 ? 0.0 : kernel_eval(k, g.center(i), t) * m.e[i];
         });
}

MonotonicitySample sample_monotonicity(const MeasureField& m, const KernelSpec& k, double t, const VectorField* u,
                                       double density) {
  if (!(k.s - t > 0.0)) throw Error(ErrorCode::PoleInPast, "kernel evaluated at t >= s");
  const auto& g = m.grid();
  const int dim = g.dim();
  std::vector<double> rho(g.size());
  parallel_blocks(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) rho[i] = kernel_eval(k, g.center(i), t);
  });
  const double vol = g.cell_volume();
  MonotonicitySample s;
  s.t = t;
  s.density = density;
  s.value = vol * parallel_sum(g.size(), [&](std::size_t i) { return rho[i] * m.e[i]; });
  s.discrepancy = vol * parallel_sum(g.size(), [&](std::size_t i) { return rho[i] * std::abs(m.xi[i]); }) /
                  (2.0 * (k.s - t));
  if (u) {
    s.transport = 0.5 * vol * parallel_sum(g.size(), [&](std::size_t i) {
                    double u2 = 0.0;
                    for (int a = 0; a < dim; ++a) u2 += (*u)[a][i] * (*u)[a][i];
                    return rho[i] * u2 * m.e[i];
                  });
  }
  return s;
}

AuditRecord monotonicity_audit(const std::vector<MonotonicitySample>& samples, const KernelSpec& k, double t0,
                               double t1, double tolerance, double tail_constant) {
  if (!(t0 < t1) || !(t1 < k.s)) throw Error(ErrorCode::PoleInPast, "audit window must satisfy t0 < t1 < s");
  AuditRecord a;
  a.t0 = t0;
  a.t1 = t1;
  a.tolerance = tolerance;
  const double slack = 1e-12 * std::max(1.0, t1);
  for (const auto& s : samples)
    if (s.t >= t0 - slack && s.t <= t1 + slack) a.samples.push_back(s);
  std::sort(a.samples.begin(), a.samples.end(),
            [](const MonotonicitySample& x, const MonotonicitySample& y) { return x.t < y.t; });
  if (a.samples.size() < 4) throw Error(ErrorCode::InsufficientSnapshots, "fewer than 4 snapshots in the audit window");

  a.delta_m = a.samples.back().value - a.samples.front().value;
  double dmax = 0.0;
  for (std::size_t j = 0; j < a.samples.size(); ++j) {
    dmax = std::max(dmax, a.samples[j].density);
    if (j == 0) continue;
    const double dt = a.samples[j].t - a.samples[j - 1].t;
    a.discrepancy_term += 0.5 * dt * (a.samples[j].discrepancy + a.samples[j - 1].discrepancy);
    a.transport_term += 0.5 * dt * (a.samples[j].transport + a.samples[j - 1].transport);
  }
  const double span = a.samples.back().t - a.samples.front().t;
  a.tail_term = tail_constant * std::exp(-1.0 / (128.0 * (k.s - a.samples.front().t))) * span * dmax;
  a.pass = a.delta_m <= a.transport_term + a.tail_term + tolerance;
  return a;
}

}  // namespace mct
