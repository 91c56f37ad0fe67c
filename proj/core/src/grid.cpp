#include "mct/grid.hpp"

#include <algorithm>
#include <cmath>

#include "mct/detail/stencil.hpp"
#include "mct/errors.hpp"
#include "mct/parallel.hpp"

namespace mct {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidWell: return "InvalidWell";
    case ErrorCode::IntegrationFailure: return "IntegrationFailure";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::RadiusTooLarge: return "RadiusTooLarge";
    case ErrorCode::RadiusTooSmall: return "RadiusTooSmall";
    case ErrorCode::InvalidTransport: return "InvalidTransport";
    case ErrorCode::SupBoundViolated: return "SupBoundViolated";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::EpsilonGridMismatch: return "EpsilonGridMismatch";
    case ErrorCode::TruncationTooTight: return "TruncationTooTight";
    case ErrorCode::StabilityViolation: return "StabilityViolation";
    case ErrorCode::PoleInPast: return "PoleInPast";
    case ErrorCode::InsufficientSnapshots: return "InsufficientSnapshots";
    case ErrorCode::NoInterface: return "NoInterface";
    case ErrorCode::MultipleLoops: return "MultipleLoops";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

PeriodicGrid::PeriodicGrid(int dim, int resolution) : dim_(dim), n_(resolution) {
  if (dim < 1 || dim > 3) throw Error(ErrorCode::InvalidGrid, "dimension must be 1, 2 or 3");
  if (resolution < 16) throw Error(ErrorCode::InvalidGrid, "resolution must be at least 16");
  h_ = 1.0 / resolution;
  cell_volume_ = std::pow(h_, dim);
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(resolution);
  for (int p = 3 - dim; p < 3; ++p) shape_[p] = resolution;
  std::size_t s = 1;
  for (int a = dim - 1; a >= 0; --a) {
    strides_[a] = s;
    s *= static_cast<std::size_t>(resolution);
  }
}

std::size_t PeriodicGrid::index(const std::array<int, 3>& c) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim_; ++a) {
    const int w = ((c[a] % n_) + n_) % n_;
    idx += static_cast<std::size_t>(w) * strides_[a];
  }
  return idx;
}

std::array<int, 3> PeriodicGrid::coords(std::size_t idx) const {
  std::array<int, 3> c{0, 0, 0};
  for (int a = 0; a < dim_; ++a) c[a] = static_cast<int>((idx / strides_[a]) % n_);
  return c;
}

Point PeriodicGrid::center(std::size_t idx) const {
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = (static_cast<double>((idx / strides_[a]) % n_) + 0.5) * h_;
  return x;
}

std::size_t PeriodicGrid::neighbor(std::size_t idx, int axis, int step) const {
  const std::size_t s = strides_[axis];
  const std::size_t c = (idx / s) % n_;
  const std::size_t n = static_cast<std::size_t>(n_);
  if (step > 0) return c + 1 == n ? idx - (n - 1) * s : idx + s;
  return c == 0 ? idx + (n - 1) * s : idx - s;
}

Point periodic_delta(const Point& a, const Point& b, int dim) {
  Point d{0.0, 0.0, 0.0};
  for (int k = 0; k < dim; ++k) {
    double v = b[k] - a[k];
    v -= std::floor(v + 0.5);
    d[k] = v;
  }
  return d;
}

double periodic_distance(const Point& a, const Point& b, int dim) {
  const Point d = periodic_delta(a, b, dim);
  return std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
}

Point wrap_point(const Point& p, int dim) {
  Point q = p;
  for (int k = 0; k < dim; ++k) q[k] = p[k] - std::floor(p[k]);
  return q;
}

ScalarField::ScalarField(const PeriodicGrid& grid, std::vector<double> data)
    : grid_(grid), data_(std::move(data)) {
  if (data_.size() != grid.size()) throw Error(ErrorCode::GridMismatch, "data size does not match grid");
}

bool ScalarField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::integral() const {
  return grid_.cell_volume() * parallel_sum(data_.size(), [&](std::size_t i) { return data_[i]; });
}

double ScalarField::max_abs() const {
  return parallel_max(data_.size(), 0.0, [&](std::size_t i) { return std::abs(data_[i]); });
}

VectorField::VectorField(const PeriodicGrid& grid, double fill) : grid_(grid) {
  for (int k = 0; k < grid.dim(); ++k) comps_.emplace_back(grid, fill);
}

VectorField::VectorField(std::vector<ScalarField> components) : comps_(std::move(components)) {
  if (comps_.empty()) throw Error(ErrorCode::GridMismatch, "vector field needs components");
  grid_ = comps_[0].grid();
  if (static_cast<int>(comps_.size()) != grid_.dim())
    throw Error(ErrorCode::GridMismatch, "component count differs from dimension");
  for (const auto& c : comps_)
    if (c.grid() != grid_) throw Error(ErrorCode::GridMismatch, "components on different grids");
}

double VectorField::norm_at(std::size_t i) const {
  double s = 0.0;
  for (const auto& c : comps_) s += c[i] * c[i];
  return std::sqrt(s);
}

double VectorField::max_norm() const {
  return parallel_max(grid_.size(), 0.0, [&](std::size_t i) { return norm_at(i); });
}

namespace {

// Applies kernel(i, minus, plus) where minus/plus are the neighbour indices of
// cell i along `axis`.
template <class K>
void along_axis(const PeriodicGrid& g, int axis, K&& kernel) {
  const std::size_t n = g.resolution();
  const int last = g.dim() - 1;
  detail::for_each_row(g, [&](std::size_t row) {
    const auto s = detail::row_stencil(g, row);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t i = s.base + j;
      if (axis == last) {
        const std::size_t m = j == 0 ? s.base + n - 1 : i - 1;
        const std::size_t p = j + 1 == n ? s.base : i + 1;
        kernel(i, m, p);
      } else {
        kernel(i, s.minus[axis] + j, s.plus[axis] + j);
      }
    }
  });
}

}  // namespace

VectorField gradient(const ScalarField& f) {
  const auto& g = f.grid();
  VectorField out(g);
  const double inv = 0.5 / g.h();
  for (int a = 0; a < g.dim(); ++a) {
    auto& o = out[a];
    along_axis(g, a, [&](std::size_t i, std::size_t m, std::size_t p) { o[i] = (f[p] - f[m]) * inv; });
  }
  return out;
}

ScalarField forward_difference(const ScalarField& f, int axis) {
  const auto& g = f.grid();
  ScalarField out(g);
  const double inv = 1.0 / g.h();
  along_axis(g, axis, [&](std::size_t i, std::size_t, std::size_t p) { out[i] = (f[p] - f[i]) * inv; });
  return out;
}

ScalarField backward_difference(const ScalarField& f, int axis) {
  const auto& g = f.grid();
  ScalarField out(g);
  const double inv = 1.0 / g.h();
  along_axis(g, axis, [&](std::size_t i, std::size_t m, std::size_t) { out[i] = (f[i] - f[m]) * inv; });
  return out;
}

VectorField forward_gradient(const ScalarField& f) {
  std::vector<ScalarField> c;
  for (int a = 0; a < f.grid().dim(); ++a) c.push_back(forward_difference(f, a));
  return VectorField(std::move(c));
}

ScalarField divergence_backward(const VectorField& v) {
  const auto& g = v.grid();
  ScalarField out(g);
  const double inv = 1.0 / g.h();
  for (int a = 0; a < g.dim(); ++a) {
    const auto& c = v[a];
    along_axis(g, a, [&](std::size_t i, std::size_t m, std::size_t) { out[i] += (c[i] - c[m]) * inv; });
  }
  return out;
}

ScalarField divergence_central(const VectorField& v) {
  const auto& g = v.grid();
  ScalarField out(g);
  const double inv = 0.5 / g.h();
  for (int a = 0; a < g.dim(); ++a) {
    const auto& c = v[a];
    along_axis(g, a, [&](std::size_t i, std::size_t m, std::size_t p) { out[i] += (c[p] - c[m]) * inv; });
  }
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  const auto& g = f.grid();
  ScalarField out(g);
  const double inv = 1.0 / (g.h() * g.h());
  for (int a = 0; a < g.dim(); ++a)
    along_axis(g, a, [&](std::size_t i, std::size_t m, std::size_t p) {
      out[i] += (f[p] - 2.0 * f[i] + f[m]) * inv;
    });
  return out;
}

ScalarField gradient_norm_squared(const ScalarField& f) {
  const auto& g = f.grid();
  ScalarField out(g);
  const double inv = 0.5 / (g.h() * g.h());
  for (int a = 0; a < g.dim(); ++a)
    along_axis(g, a, [&](std::size_t i, std::size_t m, std::size_t p) {
      const double fp = f[p] - f[i], bm = f[i] - f[m];
      out[i] += (fp * fp + bm * bm) * inv;
    });
  return out;
}

std::vector<std::size_t> ball_cells(const PeriodicGrid& grid, const Point& center, double r) {
  if (r > 0.5) throw Error(ErrorCode::RadiusTooLarge, "ball radius exceeds 1/2");
  std::vector<std::size_t> out;
  if (!(r > 0.0)) return out;
  const int n = grid.resolution();
  const double h = grid.h();
  std::array<std::vector<int>, 3> cand;
  for (int a = 0; a < 3; ++a) {
    if (a >= grid.dim()) {
      cand[a] = {0};
      continue;
    }
    const int lo = static_cast<int>(std::floor((center[a] - r) / h - 0.5));
    const int hi = static_cast<int>(std::ceil((center[a] + r) / h - 0.5));
    if (hi - lo + 1 >= n) {
      for (int i = 0; i < n; ++i) cand[a].push_back(i);
    } else {
      for (int i = lo; i <= hi; ++i) cand[a].push_back(((i % n) + n) % n);
    }
  }
  for (int i0 : cand[0])
    for (int i1 : cand[1])
      for (int i2 : cand[2]) {
        const std::size_t idx = grid.index({i0, i1, i2});
        if (periodic_distance(center, grid.center(idx), grid.dim()) < r) out.push_back(idx);
      }
  std::sort(out.begin(), out.end());
  return out;
}

CellBall::CellBall(const PeriodicGrid& grid, double r) : grid_(grid), r_(r) {
  if (r > 0.5) throw Error(ErrorCode::RadiusTooLarge, "ball radius exceeds 1/2");
  const double R = r / grid.h();
  const double R2 = R * R;
  const int span = static_cast<int>(std::ceil(R));
  const int s0 = grid.dim() >= 3 ? span : 0;
  const int s1 = grid.dim() >= 2 ? span : 0;
  for (int d0 = -s0; d0 <= s0; ++d0)
    for (int d1 = -s1; d1 <= s1; ++d1) {
      const double q = static_cast<double>(d0) * d0 + static_cast<double>(d1) * d1;
      if (q >= R2) continue;
      int half = static_cast<int>(std::floor(std::sqrt(R2 - q)));
      while (half > 0 && static_cast<double>(half) * half + q >= R2) --half;
      rows_.push_back({d0, d1, half});
      count_ += static_cast<std::size_t>(2 * half + 1);
    }
}

double CellBall::sum(const RowPrefix& prefix, std::size_t center) const {
  const int n = grid_.resolution();
  const auto& sh = grid_.shape();
  const std::size_t row = center / n;
  const int i2 = static_cast<int>(center % n);
  const int i1 = static_cast<int>(row % sh[1]);
  const int i0 = static_cast<int>(row / sh[1]);
  double acc = 0.0;
  for (const auto& rw : rows_) {
    const int j0 = ((i0 + rw.d0) % sh[0] + sh[0]) % sh[0];
    const int j1 = ((i1 + rw.d1) % sh[1] + sh[1]) % sh[1];
    acc += prefix.range(static_cast<std::size_t>(j0) * sh[1] + j1, i2 - rw.half, i2 + rw.half);
  }
  return acc;
}

RowPrefix::RowPrefix(const ScalarField& f) : n_(f.grid().resolution()) {
  const std::size_t n = n_;
  const std::size_t rows = f.size() / n;
  p_.assign(rows * (n + 1), 0.0);
  detail::for_each_row(f.grid(), [&](std::size_t r) {
    double* p = &p_[r * (n + 1)];
    const double* v = &f.data()[r * n];
    p[0] = 0.0;
    for (std::size_t j = 0; j < n; ++j) p[j + 1] = p[j] + v[j];
  });
}

double RowPrefix::range(std::size_t row, int a, int b) const {
  const int len = b - a + 1;
  if (len <= 0) return 0.0;
  const double* p = &p_[row * (n_ + 1)];
  if (len >= n_) return p[n_];
  const int s = ((a % n_) + n_) % n_;
  if (s + len <= n_) return p[s + len] - p[s];
  return (p[n_] - p[s]) + p[s + len - n_];
}

}  // namespace mct
