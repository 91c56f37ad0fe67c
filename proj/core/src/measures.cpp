#include "mct/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mct/detail/stencil.hpp"
#include "mct/errors.hpp"
#include "mct/parallel.hpp"
#include "mct/solver.hpp"

namespace mct {

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField well_values(const ScalarField& phi, const DoubleWell& well) {
  ScalarField out(phi.grid());
  const double c = well.quartic_scale();
  parallel_blocks(phi.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      if (c > 0.0) {
        const double q = 1.0 - phi[i] * phi[i];
        out[i] = c * q * q;
      } else {
        out[i] = well.value(phi[i]);
      }
    }
  });
  return out;
}

}  // namespace

MeasureField energy_and_discrepancy(const PhaseField& phi, const DoubleWell& well) {
  const double eps = phi.epsilon;
  MeasureField m;
  m.phi = phi.phi;
  m.epsilon = eps;
  m.grad_sq = gradient_norm_squared(phi.phi);
  const ScalarField w = well_values(phi.phi, well);
  m.e = ScalarField(phi.phi.grid());
  m.xi = ScalarField(phi.phi.grid());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double kin = 0.5 * eps * m.grad_sq[i], pot = w[i] / eps;
    m.e[i] = kin + pot;
    m.xi[i] = kin - pot;
  }
  return m;
}

double total_energy(const PhaseField& phi, const DoubleWell& well) {
  const auto& f = phi.phi;
  const auto& g = f.grid();
  const double eps = phi.epsilon;
  const std::size_t n = g.resolution();
  const int last = g.dim() - 1;
  const double inv = 0.5 / (g.h() * g.h());
  const double c = well.quartic_scale();
  std::vector<double> rows(detail::row_count(g));
  detail::for_each_row(g, [&](std::size_t row) {
    const auto st = detail::row_stencil(g, row);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t i = st.base + j;
      const double v = f[i];
      double gs = 0.0;
      for (int a = 0; a < last; ++a) {
        const double fp = f[st.plus[a] + j] - v, bm = v - f[st.minus[a] + j];
        gs += (fp * fp + bm * bm) * inv;
      }
      const double fp = f[j + 1 == n ? st.base : i + 1] - v, bm = v - f[j == 0 ? st.base + n - 1 : i - 1];
      gs += (fp * fp + bm * bm) * inv;
      double w;
      if (c > 0.0) {
        const double q = 1.0 - v * v;
        w = c * q * q;
      } else {
        w = well.value(v);
      }
      acc += 0.5 * eps * gs + w / eps;
    }
    rows[row] = acc;
  });
  return pairwise_sum(rows) * g.cell_volume();
}

double unit_ball_volume(int m) {
  switch (m) {
    case 0: return 1.0;
    case 1: return 2.0;
    case 2: return kPi;
    case 3: return 4.0 * kPi / 3.0;
    default: return std::pow(kPi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
  }
}

double ball_measure(const MeasureField& m, const Point& center, double r) {
  const auto cells = ball_cells(m.grid(), center, r);
  double acc = 0.0;
  for (std::size_t c : cells) acc += m.e[c];
  return acc * m.grid().cell_volume();
}

DensityReport density_ratio(const MeasureField& m, const Profile& profile, const DensityOptions& opts) {
  const auto& g = m.grid();
  DensityReport rep;
  rep.total = m.total();
  rep.d_of_t = std::max(1.0, rep.total);
  if (g.dim() == 1) return rep;

  const double eps = m.epsilon;
  std::vector<double> radii;
  if (opts.radii.empty()) {
    for (double r : {5.0 * eps, 10.0 * eps, 20.0 * eps, 0.1, 0.2})
      if (r >= 4.0 * g.h() && r <= 0.5) radii.push_back(r);
  } else {
    for (double r : opts.radii) {
      if (r < 4.0 * g.h()) throw Error(ErrorCode::RadiusTooSmall, "density radius below 4h");
      if (r > 0.5) throw Error(ErrorCode::RadiusTooLarge, "density radius above 1/2");
      radii.push_back(r);
    }
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  std::vector<double> probe_radii = radii;
  for (double r : opts.extra_radii) {
    if (r < 4.0 * g.h()) throw Error(ErrorCode::RadiusTooSmall, "density radius below 4h");
    if (r > 0.5) throw Error(ErrorCode::RadiusTooLarge, "density radius above 1/2");
    probe_radii.push_back(r);
  }
  std::sort(probe_radii.begin(), probe_radii.end());
  probe_radii.erase(std::unique(probe_radii.begin(), probe_radii.end()), probe_radii.end());

  // probe centers
  const double band = profile.psi(2.0);
  std::vector<std::size_t> centers;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(m.phi[i]) < band) centers.push_back(i);
  if (opts.max_centers > 0 && centers.size() > opts.max_centers) {
    std::vector<std::size_t> thinned;
    const double stride = static_cast<double>(centers.size()) / static_cast<double>(opts.max_centers);
    for (std::size_t k = 0; k < opts.max_centers; ++k)
      thinned.push_back(centers[static_cast<std::size_t>(std::floor(k * stride))]);
    centers = std::move(thinned);
  }
  const std::size_t first_probe = centers.size();
  for (const Point& p : opts.extra_centers) {
    const Point w = wrap_point(p, g.dim());
    std::array<int, 3> c{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) c[a] = static_cast<int>(std::floor(w[a] / g.h()));
    centers.push_back(g.index(c));
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  for (int k = 0; k < opts.random_centers; ++k) centers.push_back(pick(rng));

  const RowPrefix prefix(m.e);
  const std::size_t end_probe = first_probe + opts.extra_centers.size();
  std::vector<CellBall> balls, probe_balls;
  for (double r : radii) balls.emplace_back(g, r);
  for (double r : probe_radii) probe_balls.emplace_back(g, r);
  const double omega = unit_ball_volume(g.dim() - 1);
  const double vol = g.cell_volume();

  std::vector<RatioSample> samples(centers.size());
  parallel_blocks(
      centers.size(),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
          RatioSample best;
          best.center = g.center(centers[k]);
          const bool probe = k >= first_probe && k < end_probe;
          const auto& bs = probe ? probe_balls : balls;
          const auto& rs = probe ? probe_radii : radii;
          for (std::size_t j = 0; j < bs.size(); ++j) {
            const double mu = bs[j].sum(prefix, centers[k]) * vol;
            const double ratio = mu / (omega * std::pow(rs[j], g.dim() - 1));
            if (ratio > best.ratio) {
              best.ratio = ratio;
              best.radius = rs[j];
            }
          }
          samples[k] = best;
        }
      },
      64);
  for (const auto& s : samples)
    if (s.ratio > rep.argmax_ratio) {
      rep.argmax_ratio = s.ratio;
      rep.argmax_center = s.center;
      rep.argmax_radius = s.radius;
    }
  rep.d_of_t = std::max(rep.d_of_t, rep.argmax_ratio);
  rep.ratio_samples = std::move(samples);
  return rep;
}

DiscrepancyBound positive_discrepancy_bound(const MeasureField& m, double beta) {
  DiscrepancyBound b;
  b.sup_value = parallel_max(m.xi.size(), 0.0, [&](std::size_t i) { return m.xi[i]; });
  b.threshold = 10.0 * std::pow(m.epsilon, -beta);
  b.pass = b.sup_value <= b.threshold;
  return b;
}

double discrepancy_l1(const MeasureField& m) {
  return m.grid().cell_volume() * parallel_sum(m.xi.size(), [&](std::size_t i) { return std::abs(m.xi[i]); });
}

BvProjection bv_projection(const PhaseField& phi, const Profile& profile) {
  const auto& g = phi.phi.grid();
  BvProjection out{ScalarField(g), 0.0};
  const ScalarField gs = gradient_norm_squared(phi.phi);
  ScalarField tv(g);
  parallel_blocks(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double s = std::clamp(phi.phi[i], -1.0, 1.0);
      out.w[i] = profile.phi_map(s);
      tv[i] = profile.dphi_map(s) * std::sqrt(gs[i]);
    }
  });
  out.total_variation = tv.integral();
  return out;
}

ScalarField mean_curvature_term(const PhaseField& phi, const DoubleWell& well) {
  ScalarField h = laplacian(phi.phi);
  const ScalarField wp = well_derivative(phi.phi, well);
  const double k = 1.0 / (phi.epsilon * phi.epsilon);
  for (std::size_t i = 0; i < h.size(); ++i) h[i] -= k * wp[i];
  return h;
}

TestFunction test_function_by_name(const std::string& name) {
  if (name == "one") return TestFunction::One;
  if (name == "cos_x") return TestFunction::CosX;
  throw Error(ErrorCode::ConfigInvalid, "unknown test function '" + name + "' (one | cos_x)");
}

std::string to_string(TestFunction f) { return f == TestFunction::One ? "one" : "cos_x"; }

double test_value(TestFunction f, const Point& x) {
  return f == TestFunction::One ? 1.0 : 1.0 + std::cos(2.0 * kPi * x[0]);
}

Point test_gradient(TestFunction f, const Point& x) {
  if (f == TestFunction::One) return {0.0, 0.0, 0.0};
  return {-2.0 * kPi * std::sin(2.0 * kPi * x[0]), 0.0, 0.0};
}

double weighted_measure(const MeasureField& m, TestFunction f) {
  const auto& g = m.grid();
  return g.cell_volume() *
         parallel_sum(g.size(), [&](std::size_t i) { return test_value(f, g.center(i)) * m.e[i]; });
}

BrakkeResidual brakke_residual(const PhaseField& before, const PhaseField& after, double dt,
                               const DoubleWell& well, const VectorField* u, TestFunction f) {
  const auto& g = before.phi.grid();
  if (after.phi.grid() != g) throw Error(ErrorCode::GridMismatch, "snapshots on different grids");
  const MeasureField m0 = energy_and_discrepancy(before, well);
  const MeasureField m1 = energy_and_discrepancy(after, well);
  BrakkeResidual r;
  r.lhs = (weighted_measure(m1, f) - weighted_measure(m0, f)) / dt;

  const double eps = before.epsilon;
  const ScalarField h = mean_curvature_term(before, well);
  const VectorField grad = gradient(before.phi);
  ScalarField adv;
  if (u) adv = advection(before.phi, *u, false);
  const int dim = g.dim();
  r.rhs = g.cell_volume() * parallel_sum(g.size(), [&](std::size_t i) {
            const Point x = g.center(i);
            const double tv = test_value(f, x);
            const Point tg = test_gradient(f, x);
            double gdot = 0.0;
            for (int a = 0; a < dim; ++a) gdot += tg[a] * grad[a][i];
            const double a = u ? adv[i] : 0.0;
            return -eps * tv * h[i] * h[i] - eps * h[i] * gdot + eps * tv * h[i] * a + eps * gdot * a;
          });
  const double mu = m0.total();
  r.residual = std::abs(r.lhs - r.rhs) / (mu > 0.0 ? mu : 1.0);
  return r;
}

}  // namespace mct
