#include "mct/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mct/errors.hpp"
#include "mct/parallel.hpp"

namespace mct {

namespace {

constexpr double kPi = std::numbers::pi;

// smoothstep 6t^5 - 15t^4 + 10t^3 and its derivative
double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
double smoothstep_d(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

constexpr double kChiInner = 0.3;
constexpr double kChiWidth = 0.15;

double chi(double rho) { return 1.0 - smoothstep((rho - kChiInner) / kChiWidth); }
double chi_d(double rho) { return -smoothstep_d((rho - kChiInner) / kChiWidth) / kChiWidth; }

void require_dim(int dim) {
  if (dim < 1 || dim > 3) throw Error(ErrorCode::InvalidTransport, "dimension must be 1, 2 or 3");
}

std::size_t nearest_cell(const PeriodicGrid& g, const Point& x) {
  std::array<int, 3> c{0, 0, 0};
  const Point w = wrap_point(x, g.dim());
  for (int a = 0; a < g.dim(); ++a) c[a] = static_cast<int>(std::floor(w[a] / g.h()));
  return g.index(c);
}

}  // namespace

std::string to_string(TransportKind k) {
  switch (k) {
    case TransportKind::Zero: return "zero";
    case TransportKind::Constant: return "constant";
    case TransportKind::Shear: return "shear";
    case TransportKind::Rotation: return "rotation";
    case TransportKind::RoughRadial: return "rough_radial";
    case TransportKind::Sampled: return "sampled";
  }
  return "unknown";
}

bool pq_admissible(double p, double q, int n) {
  if (!(q > 2.0) || !std::isfinite(q)) return false;
  if (!(n * q / (2.0 * (q - 1.0)) < p)) return false;
  if (n == 2 && p < 4.0 / 3.0) return false;
  return std::isfinite(p);
}

double p_hat(double p, double q, int n) {
  if (p < n) return (2.0 * p * q - 2.0 * p - n * q) / (p * q);
  return (q - 2.0) / q;
}

TransportSpec TransportSpec::zero(int dim) {
  require_dim(dim);
  TransportSpec u;
  u.dim_ = dim;
  return u;
}

TransportSpec TransportSpec::constant(int dim, const Point& U) {
  require_dim(dim);
  TransportSpec u;
  u.dim_ = dim;
  u.kind_ = TransportKind::Constant;
  for (int k = 0; k < dim; ++k) u.vec_[k] = U[k];
  if (std::all_of(u.vec_.begin(), u.vec_.end(), [](double v) { return v == 0.0; })) u.kind_ = TransportKind::Zero;
  return u;
}

TransportSpec TransportSpec::shear(int dim, double amplitude) {
  if (dim < 2 || dim > 3) throw Error(ErrorCode::InvalidTransport, "shear needs dim 2 or 3");
  TransportSpec u;
  u.dim_ = dim;
  u.kind_ = amplitude == 0.0 ? TransportKind::Zero : TransportKind::Shear;
  u.amp_ = amplitude;
  return u;
}

TransportSpec TransportSpec::rotation(int dim, double omega, const Point& center) {
  if (dim < 2 || dim > 3) throw Error(ErrorCode::InvalidTransport, "rotation needs dim 2 or 3");
  TransportSpec u;
  u.dim_ = dim;
  u.kind_ = omega == 0.0 ? TransportKind::Zero : TransportKind::Rotation;
  u.amp_ = omega;
  u.vec_ = center;
  return u;
}

TransportSpec TransportSpec::rough_radial(int dim, double amplitude, const Point& center) {
  require_dim(dim);
  TransportSpec u;
  u.dim_ = dim;
  u.kind_ = amplitude == 0.0 ? TransportKind::Zero : TransportKind::RoughRadial;
  u.amp_ = amplitude;
  u.vec_ = center;
  return u;
}

TransportSpec TransportSpec::sampled(std::vector<double> times, std::vector<VectorField> fields) {
  if (times.empty() || times.size() != fields.size())
    throw Error(ErrorCode::InvalidTransport, "sampled transport needs one field per time knot");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw Error(ErrorCode::InvalidTransport, "knot times must increase");
  const PeriodicGrid g = fields[0].grid();
  for (const auto& f : fields) {
    if (f.grid() != g) throw Error(ErrorCode::GridMismatch, "sampled transport knots on different grids");
    for (int c = 0; c < f.dim(); ++c)
      if (!f[c].all_finite()) throw Error(ErrorCode::InvalidTransport, "non-finite sampled transport");
  }
  TransportSpec u;
  u.dim_ = g.dim();
  u.kind_ = TransportKind::Sampled;
  u.times_ = std::move(times);
  u.fields_ = std::move(fields);
  for (const auto& f : u.fields_) {
    std::vector<ScalarField> comps;
    for (int i = 0; i < u.dim_; ++i) {
      const VectorField gi = gradient(f[i]);
      for (int j = 0; j < u.dim_; ++j) comps.push_back(gi[j]);
    }
    // stored flat as dim*dim scalar fields; wrap in VectorFields of dim comps
    for (int i = 0; i < u.dim_; ++i) {
      std::vector<ScalarField> row(comps.begin() + i * u.dim_, comps.begin() + (i + 1) * u.dim_);
      u.grads_.emplace_back(std::move(row));
    }
  }
  return u;
}

TransportSpec& TransportSpec::with_exponents(double p, double q) {
  if (!pq_admissible(p, q, dim_))
    throw Error(ErrorCode::InvalidTransport, "exponents (p, q) violate the admissibility condition");
  p_ = p;
  q_ = q;
  return *this;
}

VectorField TransportSpec::interpolate(double t) const {
  if (times_.size() == 1 || t <= times_.front()) return fields_.front();
  if (t >= times_.back()) return fields_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - times_.begin());
  const double w = (t - times_[k - 1]) / (times_[k] - times_[k - 1]);
  VectorField out = fields_[k - 1];
  for (int c = 0; c < dim_; ++c)
    for (std::size_t i = 0; i < out[c].size(); ++i)
      out[c][i] = (1.0 - w) * fields_[k - 1][c][i] + w * fields_[k][c][i];
  return out;
}

Point TransportSpec::value(const Point& x, double t) const {
  Point u{0.0, 0.0, 0.0};
  switch (kind_) {
    case TransportKind::Zero: break;
    case TransportKind::Constant: u = vec_; break;
    case TransportKind::Shear: u[0] = amp_ * std::sin(2.0 * kPi * x[1]); break;
    case TransportKind::Rotation: {
      const Point d = periodic_delta(vec_, x, dim_);
      const double rho = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
      const double c = amp_ * chi(rho);
      u[0] = -c * d[1];
      u[1] = c * d[0];
      break;
    }
    case TransportKind::RoughRadial: {
      const Point d = periodic_delta(vec_, x, dim_);
      const double rho = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
      if (rho == 0.0) break;
      const double g = amp_ * chi(rho) / std::sqrt(rho);
      for (int k = 0; k < dim_; ++k) u[k] = g * d[k];
      break;
    }
    case TransportKind::Sampled: {
      const auto& g = fields_.front().grid();
      const std::size_t cell = nearest_cell(g, x);
      if (times_.size() == 1 || t <= times_.front()) {
        for (int k = 0; k < dim_; ++k) u[k] = fields_.front()[k][cell];
      } else if (t >= times_.back()) {
        for (int k = 0; k < dim_; ++k) u[k] = fields_.back()[k][cell];
      } else {
        const auto it = std::upper_bound(times_.begin(), times_.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - times_.begin());
        const double w = (t - times_[j - 1]) / (times_[j] - times_[j - 1]);
        for (int k = 0; k < dim_; ++k) u[k] = (1.0 - w) * fields_[j - 1][k][cell] + w * fields_[j][k][cell];
      }
      break;
    }
  }
  return u;
}

Jacobian TransportSpec::jacobian(const Point& x, double t) const {
  Jacobian J{};
  switch (kind_) {
    case TransportKind::Zero:
    case TransportKind::Constant: break;
    case TransportKind::Shear: J[0][1] = amp_ * 2.0 * kPi * std::cos(2.0 * kPi * x[1]); break;
    case TransportKind::Rotation: {
      const Point d = periodic_delta(vec_, x, dim_);
      const double rho = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
      const double c = chi(rho);
      const double cd = rho > 0.0 ? chi_d(rho) / rho : 0.0;
      const double R[3] = {-d[1], d[0], 0.0};
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) J[i][j] = amp_ * cd * R[i] * d[j];
      J[0][1] += -amp_ * c;
      J[1][0] += amp_ * c;
      break;
    }
    case TransportKind::RoughRadial: {
      const Point d = periodic_delta(vec_, x, dim_);
      const double rho = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
      if (rho == 0.0) break;  // integrable singularity; point value undefined
      const double s = std::sqrt(rho);
      const double g = chi(rho) / s;
      const double gd = -0.5 * chi(rho) / (rho * s) + chi_d(rho) / s;
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) J[i][j] = amp_ * ((i == j ? g : 0.0) + gd * d[i] * d[j] / rho);
      break;
    }
    case TransportKind::Sampled: {
      const auto& g = fields_.front().grid();
      const std::size_t cell = nearest_cell(g, x);
      std::size_t k = 0;
      if (times_.size() > 1 && t > times_.front()) {
        k = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin()) - 1;
        k = std::min(k, times_.size() - 1);
      }
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) J[i][j] = grads_[k * dim_ + i][j][cell];
      break;
    }
  }
  return J;
}

VectorField TransportSpec::sample(const PeriodicGrid& grid, double t) const {
  if (grid.dim() != dim_) throw Error(ErrorCode::GridMismatch, "transport dimension differs from grid");
  if (kind_ == TransportKind::Sampled && fields_.front().grid() == grid) return interpolate(t);
  VectorField out(grid);
  parallel_blocks(grid.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const Point v = value(grid.center(i), t);
      for (int k = 0; k < dim_; ++k) out[k][i] = v[k];
    }
  });
  return out;
}

double sobolev_norm(const TransportSpec& u, double T, const PeriodicGrid& grid) {
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidTransport, "sobolev_norm needs T > 0");
  if (u.is_zero()) return 0.0;
  const double p = u.p(), q = u.q();
  const int dim = grid.dim();

  auto slice = [&](double t) {
    if (u.kind() == TransportKind::Sampled) {
      const VectorField v = u.sample(grid, t);
      std::vector<VectorField> gr;
      for (int i = 0; i < dim; ++i) gr.push_back(gradient(v[i]));
      const double s = parallel_sum(grid.size(), [&](std::size_t c) {
        double n2 = 0.0, g2 = 0.0;
        for (int i = 0; i < dim; ++i) {
          n2 += v[i][c] * v[i][c];
          for (int j = 0; j < dim; ++j) g2 += gr[i][j][c] * gr[i][j][c];
        }
        return std::pow(n2, 0.5 * p) + std::pow(g2, 0.5 * p);
      });
      return s * grid.cell_volume();
    }
    const double s = parallel_sum(grid.size(), [&](std::size_t c) {
      const Point x = grid.center(c);
      const Point v = u.value(x, t);
      const Jacobian J = u.jacobian(x, t);
      double n2 = 0.0, g2 = 0.0;
      for (int i = 0; i < dim; ++i) {
        n2 += v[i] * v[i];
        for (int j = 0; j < dim; ++j) g2 += J[i][j] * J[i][j];
      }
      return std::pow(n2, 0.5 * p) + std::pow(g2, 0.5 * p);
    });
    return s * grid.cell_volume();
  };

  double acc = 0.0;
  if (u.steady()) {
    acc = std::pow(slice(0.0), q / p) * T;
  } else {
    constexpr int kSlices = 64;
    const double dt = T / kSlices;
    for (int k = 0; k < kSlices; ++k) acc += std::pow(slice((k + 0.5) * dt), q / p) * dt;
  }
  return std::pow(acc, 1.0 / q);
}

ScalarField gaussian_blur(const ScalarField& f, double std_dev) {
  const auto& g = f.grid();
  if (!(std_dev > 0.0)) return f;
  const int n = g.resolution();
  const int K = static_cast<int>(std::ceil(5.0 * std_dev / g.h()));
  std::vector<double> w(2 * K + 1);
  double total = 0.0;
  for (int k = -K; k <= K; ++k) {
    const double x = k * g.h();
    w[k + K] = std::exp(-x * x / (2.0 * std_dev * std_dev));
    total += w[k + K];
  }
  for (auto& v : w) v /= total;

  ScalarField cur = f;
  for (int a = 0; a < g.dim(); ++a) {
    ScalarField next(g);
    const std::size_t s = g.stride(a);
    parallel_blocks(g.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const int c = static_cast<int>((i / s) % n);
        const std::size_t base = i - static_cast<std::size_t>(c) * s;
        double acc = 0.0;
        for (int k = -K; k <= K; ++k) {
          const int j = (((c + k) % n) + n) % n;
          acc += w[k + K] * cur[base + static_cast<std::size_t>(j) * s];
        }
        next[i] = acc;
      }
    });
    cur = std::move(next);
  }
  return cur;
}

MollifiedTransport mollify(const TransportSpec& u, double epsilon, const PeriodicGrid& grid, double T,
                           double beta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::InvalidTransport, "epsilon must lie in (0, 1)");
  if (!(beta > 0.0 && beta < 0.5)) throw Error(ErrorCode::InvalidTransport, "beta must lie in (0, 1/2)");
  if (u.dim() != grid.dim()) throw Error(ErrorCode::GridMismatch, "transport dimension differs from grid");
  MollifiedTransport m;
  m.grid_ = grid;
  m.epsilon_ = epsilon;
  m.beta_ = beta;
  m.std_ = std::max(grid.h(), std::pow(epsilon, 1.0 + beta));
  m.zero_ = u.is_zero();

  std::vector<double> knots;
  if (u.steady()) {
    knots = {0.0};
  } else {
    for (double t : u.knot_times())
      if (t <= T) knots.push_back(t);
    if (knots.empty() || knots.back() < T) {
      // keep the first knot past T so interpolation covers [0, T]
      for (double t : u.knot_times())
        if (t > T) {
          knots.push_back(t);
          break;
        }
    }
    if (knots.front() > 0.0) knots.insert(knots.begin(), 0.0);
  }
  m.times_ = knots;

  const int dim = grid.dim();
  for (double t : knots) {
    VectorField raw = u.sample(grid, t);
    std::vector<ScalarField> comps;
    for (int c = 0; c < dim; ++c) comps.push_back(m.zero_ ? raw[c] : gaussian_blur(raw[c], m.std_));
    VectorField sm(std::move(comps));
    if (!m.zero_) {
      m.sup_u_ = std::max(m.sup_u_, sm.max_norm());
      std::vector<VectorField> gr;
      for (int c = 0; c < dim; ++c) gr.push_back(gradient(sm[c]));
      const double gmax = parallel_max(grid.size(), 0.0, [&](std::size_t i) {
        double s = 0.0;
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b) s += gr[a][b][i] * gr[a][b][i];
        return std::sqrt(s);
      });
      m.sup_grad_ = std::max(m.sup_grad_, gmax);
    }
    m.fields_.push_back(std::move(sm));
  }

  const double bound_u = std::pow(epsilon, -beta);
  const double bound_g = std::pow(epsilon, -(beta + 1.0));
  if (m.sup_u_ > bound_u)
    throw Error(ErrorCode::SupBoundViolated, "sup|u_eps| = " + std::to_string(m.sup_u_) + " exceeds eps^-beta = " +
                                                 std::to_string(bound_u));
  if (m.sup_grad_ > bound_g)
    throw Error(ErrorCode::SupBoundViolated, "sup|grad u_eps| = " + std::to_string(m.sup_grad_) +
                                                 " exceeds eps^-(beta+1) = " + std::to_string(bound_g));
  return m;
}

VectorField MollifiedTransport::at(double t) const {
  if (fields_.size() == 1 || t <= times_.front()) return fields_.front();
  if (t >= times_.back()) return fields_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - times_.begin());
  const double w = (t - times_[k - 1]) / (times_[k] - times_[k - 1]);
  VectorField out = fields_[k - 1];
  for (int c = 0; c < out.dim(); ++c)
    for (std::size_t i = 0; i < out[c].size(); ++i)
      out[c][i] = (1.0 - w) * fields_[k - 1][c][i] + w * fields_[k][c][i];
  return out;
}

}  // namespace mct
