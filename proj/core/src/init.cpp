#include "mct/init.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mct/errors.hpp"
#include "mct/parallel.hpp"

namespace mct {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kClearance = 0.1;

double wrap01(double v) { return v - std::floor(v); }

// minimal-image scalar offset in [-1/2, 1/2)
double wrap_half(double v) { return v - std::floor(v + 0.5); }

}  // namespace

std::string to_string(GeometryKind k) {
  switch (k) {
    case GeometryKind::Circle: return "circle";
    case GeometryKind::Sphere: return "sphere";
    case GeometryKind::TwoCircles: return "two_circles";
    case GeometryKind::Annulus: return "annulus";
    case GeometryKind::Graph: return "graph";
  }
  return "unknown";
}

InitialGeometry InitialGeometry::circle(const Point& center, double r0) {
  if (!(r0 > 0.0) || 1.0 - 2.0 * r0 < kClearance)
    throw Error(ErrorCode::InvalidGeometry, "circle radius must lie in (0, 0.45]");
  InitialGeometry g;
  g.kind_ = GeometryKind::Circle;
  g.dim_ = 2;
  g.c1_ = wrap_point(center, 2);
  g.c1_[2] = 0.0;
  g.r1_ = r0;
  return g;
}

InitialGeometry InitialGeometry::sphere(const Point& center, double r0) {
  if (!(r0 > 0.0) || 1.0 - 2.0 * r0 < kClearance)
    throw Error(ErrorCode::InvalidGeometry, "sphere radius must lie in (0, 0.45]");
  InitialGeometry g;
  g.kind_ = GeometryKind::Sphere;
  g.dim_ = 3;
  g.c1_ = wrap_point(center, 3);
  g.r1_ = r0;
  return g;
}

InitialGeometry InitialGeometry::two_circles(const Point& c1, double r1, const Point& c2, double r2) {
  if (!(r1 > 0.0) || !(r2 > 0.0) || 1.0 - 2.0 * std::max(r1, r2) < kClearance)
    throw Error(ErrorCode::InvalidGeometry, "circle radii must lie in (0, 0.45]");
  InitialGeometry g;
  g.kind_ = GeometryKind::TwoCircles;
  g.dim_ = 2;
  g.c1_ = wrap_point(c1, 2);
  g.c2_ = wrap_point(c2, 2);
  g.c1_[2] = g.c2_[2] = 0.0;
  g.r1_ = r1;
  g.r2_ = r2;
  if (periodic_distance(g.c1_, g.c2_, 2) <= r1 + r2)
    throw Error(ErrorCode::InvalidGeometry, "circles must have disjoint closures");
  return g;
}

InitialGeometry InitialGeometry::annulus(const Point& center, double r_in, double r_out) {
  if (!(r_in > 0.0) || !(r_out > r_in) || 1.0 - 2.0 * r_out < kClearance)
    throw Error(ErrorCode::InvalidGeometry, "annulus needs 0 < r_in < r_out <= 0.45");
  InitialGeometry g;
  g.kind_ = GeometryKind::Annulus;
  g.dim_ = 2;
  g.c1_ = wrap_point(center, 2);
  g.c1_[2] = 0.0;
  g.r1_ = r_in;
  g.r2_ = r_out;
  return g;
}

InitialGeometry InitialGeometry::graph(int dim, double base, std::vector<double> heights) {
  if (dim < 1 || dim > 2) throw Error(ErrorCode::InvalidGeometry, "graph geometry needs dim 1 or 2");
  if (heights.empty()) throw Error(ErrorCode::InvalidGeometry, "graph needs height samples");
  if (dim == 1 && heights.size() != 1) throw Error(ErrorCode::InvalidGeometry, "dim 1 graph takes one height");
  InitialGeometry g;
  g.kind_ = GeometryKind::Graph;
  g.dim_ = dim;
  g.base_ = wrap01(base);
  // store widths w = (g - base) mod 1 so the slab never straddles the seam ambiguously
  for (double v : heights) {
    const double w = wrap01(v - g.base_);
    if (w < kClearance || w > 1.0 - kClearance)
      throw Error(ErrorCode::InvalidGeometry, "graph slab widths must stay within [0.1, 0.9]");
    g.heights_.push_back(w);
  }
  g.build_spline();
  return g;
}

void InitialGeometry::build_spline() {
  const std::size_t N = heights_.size();
  m_.assign(N, 0.0);
  if (N < 3) {
    if (N == 2 && heights_[0] != heights_[1])
      throw Error(ErrorCode::InvalidGeometry, "need at least 3 samples for a non-constant graph");
    return;
  }
  const double H = 1.0 / static_cast<double>(N);
  std::vector<double> rhs(N);
  for (std::size_t j = 0; j < N; ++j)
    rhs[j] = 6.0 * (heights_[(j + 1) % N] - 2.0 * heights_[j] + heights_[(j + N - 1) % N]) / (H * H);
  // cyclic, strictly diagonally dominant: Gauss-Seidel converges geometrically
  for (int it = 0; it < 10000; ++it) {
    double change = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      const double v = (rhs[j] - m_[(j + N - 1) % N] - m_[(j + 1) % N]) / 4.0;
      change = std::max(change, std::abs(v - m_[j]));
      scale = std::max(scale, std::abs(v));
      m_[j] = v;
    }
    if (change <= 1e-15 * std::max(1.0, scale)) break;
  }
}

double InitialGeometry::height(double y) const {
  const std::size_t N = heights_.size();
  if (N < 3) return base_ + heights_[0];
  const double H = 1.0 / static_cast<double>(N);
  y = wrap01(y);
  std::size_t j = std::min(N - 1, static_cast<std::size_t>(y / H));
  const double t = y - static_cast<double>(j) * H;
  const std::size_t k = (j + 1) % N;
  const double s = H - t;
  const double v = m_[j] * s * s * s / (6.0 * H) + m_[k] * t * t * t / (6.0 * H) +
                   (heights_[j] / H - m_[j] * H / 6.0) * s + (heights_[k] / H - m_[k] * H / 6.0) * t;
  return base_ + v;
}

double InitialGeometry::height_d1(double y) const {
  const std::size_t N = heights_.size();
  if (N < 3) return 0.0;
  const double H = 1.0 / static_cast<double>(N);
  y = wrap01(y);
  std::size_t j = std::min(N - 1, static_cast<std::size_t>(y / H));
  const double t = y - static_cast<double>(j) * H;
  const std::size_t k = (j + 1) % N;
  const double s = H - t;
  return -m_[j] * s * s / (2.0 * H) + m_[k] * t * t / (2.0 * H) - (heights_[j] / H - m_[j] * H / 6.0) +
         (heights_[k] / H - m_[k] * H / 6.0);
}

double InitialGeometry::height_d2(double y) const {
  const std::size_t N = heights_.size();
  if (N < 3) return 0.0;
  const double H = 1.0 / static_cast<double>(N);
  y = wrap01(y);
  std::size_t j = std::min(N - 1, static_cast<std::size_t>(y / H));
  const double t = y - static_cast<double>(j) * H;
  const std::size_t k = (j + 1) % N;
  return (m_[j] * (H - t) + m_[k] * t) / H;
}

double InitialGeometry::graph_curve_distance(const Point& x) const {
  if (dim_ == 1) return std::abs(wrap_half(x[0] - height(0.0)));
  const std::size_t N = heights_.size();
  if (N < 3) return std::abs(wrap_half(x[0] - height(0.0)));
  // coarse search, then Newton on the squared distance in covering coordinates
  const int M = static_cast<int>(std::max<std::size_t>(256, 8 * N));
  double best = std::numeric_limits<double>::infinity(), y0 = 0.0;
  for (int k = 0; k < M; ++k) {
    const double y = (k + 0.5) / M;
    const double a = wrap_half(x[0] - height(y)), b = wrap_half(x[1] - y);
    const double d2 = a * a + b * b;
    if (d2 < best) {
      best = d2;
      y0 = y;
    }
  }
  const double X = height(y0) + wrap_half(x[0] - height(y0));
  const double Y = y0 + wrap_half(x[1] - y0);
  double y = y0;
  const double step_cap = 1.0 / M;
  for (int it = 0; it < 30; ++it) {
    const double g = height(y), g1 = height_d1(y), g2 = height_d2(y);
    const double F = -(X - g) * g1 - (Y - y);
    const double dF = g1 * g1 - (X - g) * g2 + 1.0;
    if (dF <= 0.0) break;
    double dy = -F / dF;
    dy = std::clamp(dy, -step_cap, step_cap);
    y += dy;
    if (std::abs(dy) < 1e-15) break;
  }
  const double a = X - height(y), b = Y - y;
  return std::min(std::sqrt(a * a + b * b), std::sqrt(best));
}

double InitialGeometry::signed_distance(const Point& x) const {
  switch (kind_) {
    case GeometryKind::Circle:
    case GeometryKind::Sphere: return r1_ - periodic_distance(c1_, x, dim_);
    case GeometryKind::TwoCircles:
      return std::max(r1_ - periodic_distance(c1_, x, 2), r2_ - periodic_distance(c2_, x, 2));
    case GeometryKind::Annulus: {
      const double rho = periodic_distance(c1_, x, 2);
      return std::min(rho - r1_, r2_ - rho);
    }
    case GeometryKind::Graph: {
      const double y = dim_ >= 2 ? x[1] : 0.0;
      const bool inside = wrap01(x[0] - base_) < height(y) - base_;
      const double d = std::min(std::abs(wrap_half(x[0] - base_)), graph_curve_distance(x));
      return inside ? d : -d;
    }
  }
  return 0.0;
}

double InitialGeometry::reach() const {
  switch (kind_) {
    case GeometryKind::Circle:
    case GeometryKind::Sphere: return std::min(r1_, 0.5 - r1_);
    case GeometryKind::TwoCircles: {
      const double gap = periodic_distance(c1_, c2_, 2) - r1_ - r2_;
      return std::min({r1_, r2_, 0.5 * gap, 0.5 - r1_, 0.5 - r2_});
    }
    case GeometryKind::Annulus: return std::min({r1_, 0.5 * (r2_ - r1_), 0.5 - r2_});
    case GeometryKind::Graph: {
      double wmin = 1.0, wmax = 0.0, kmax = 0.0;
      const int M = 4096;
      for (int k = 0; k < M; ++k) {
        const double y = (k + 0.5) / M;
        const double w = height(y) - base_;
        wmin = std::min(wmin, w);
        wmax = std::max(wmax, w);
        const double g1 = height_d1(y);
        kmax = std::max(kmax, std::abs(height_d2(y)) / std::pow(1.0 + g1 * g1, 1.5));
      }
      double r = std::min({0.2, 0.5 * wmin, 0.5 * (1.0 - wmax)});
      if (kmax > 0.0) r = std::min(r, 1.0 / kmax);
      return r;
    }
  }
  return 0.0;
}

double InitialGeometry::boundary_measure() const {
  switch (kind_) {
    case GeometryKind::Circle: return 2.0 * kPi * r1_;
    case GeometryKind::Sphere: return 4.0 * kPi * r1_ * r1_;
    case GeometryKind::TwoCircles: return 2.0 * kPi * (r1_ + r2_);
    case GeometryKind::Annulus: return 2.0 * kPi * (r1_ + r2_);
    case GeometryKind::Graph: {
      if (dim_ == 1) return 2.0;
      const int M = 8192;
      double len = 0.0;
      for (int k = 0; k < M; ++k) {
        const double g1 = height_d1((k + 0.5) / M);
        len += std::sqrt(1.0 + g1 * g1);
      }
      return 1.0 + len / M;
    }
  }
  return 0.0;
}

double InitialGeometry::volume() const {
  switch (kind_) {
    case GeometryKind::Circle: return kPi * r1_ * r1_;
    case GeometryKind::Sphere: return 4.0 / 3.0 * kPi * r1_ * r1_ * r1_;
    case GeometryKind::TwoCircles: return kPi * (r1_ * r1_ + r2_ * r2_);
    case GeometryKind::Annulus: return kPi * (r2_ * r2_ - r1_ * r1_);
    case GeometryKind::Graph: {
      if (dim_ == 1 || heights_.size() < 3) return heights_[0];
      const int M = 8192;
      double v = 0.0;
      for (int k = 0; k < M; ++k) v += height((k + 0.5) / M) - base_;
      return v / M;
    }
  }
  return 0.0;
}

InitialGeometry InitialGeometry::smoothed(double scale) const {
  if (kind_ != GeometryKind::Graph || heights_.size() < 3 || !(scale > 0.0)) return *this;
  const std::size_t N = heights_.size();
  const double H = 1.0 / static_cast<double>(N);
  const int K = static_cast<int>(std::ceil(5.0 * scale / H));
  std::vector<double> w(2 * K + 1);
  double total = 0.0;
  for (int k = -K; k <= K; ++k) {
    w[k + K] = std::exp(-0.5 * (k * H) * (k * H) / (scale * scale));
    total += w[k + K];
  }
  InitialGeometry g = *this;
  const long n = static_cast<long>(N);
  for (std::size_t j = 0; j < N; ++j) {
    double acc = 0.0;
    for (int k = -K; k <= K; ++k) acc += w[k + K] * heights_[static_cast<std::size_t>(((static_cast<long>(j) + k) % n + n) % n)];
    g.heights_[j] = acc / total;
  }
  g.build_spline();
  return g;
}

double Truncation::operator()(double d) const {
  const double a = std::abs(d), third = r_ / 3.0;
  double v;
  if (a <= third) {
    v = a;
  } else if (a >= 2.0 * third) {
    v = 0.5 * r_;
  } else {
    const double t = (a - third) / third;
    // integral of 1 - S(t) with S the quintic smoothstep
    const double t4 = t * t * t * t;
    v = third + third * (t - (t4 * t * t - 3.0 * t4 * t + 2.5 * t4));
  }
  return d < 0.0 ? -v : v;
}

double Truncation::slope(double d) const {
  const double a = std::abs(d), third = r_ / 3.0;
  if (a <= third) return 1.0;
  if (a >= 2.0 * third) return 0.0;
  const double t = (a - third) / third;
  return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

PhaseField build_initial_field(const InitialGeometry& geometry, const Profile& profile, double epsilon,
                               const PeriodicGrid& grid, double r_trunc) {
  if (geometry.dim() != grid.dim()) throw Error(ErrorCode::GridMismatch, "geometry dimension differs from grid");
  if (epsilon < 2.0 * grid.h() * (1.0 - 1e-12))
    throw Error(ErrorCode::EpsilonGridMismatch, "epsilon below 2h leaves the profile unresolved");
  const InitialGeometry geo = geometry.smoothed(2.0 * grid.h());
  if (!(r_trunc > 0.0)) r_trunc = geo.reach();
  if (epsilon > r_trunc / 3.0)
    throw Error(ErrorCode::TruncationTooTight, "epsilon exceeds r_trunc / 3 = " + std::to_string(r_trunc / 3.0));
  const Truncation trunc(r_trunc);
  PhaseField out{ScalarField(grid), epsilon};
  parallel_blocks(grid.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      out.phi[i] = profile.psi(trunc(geo.signed_distance(grid.center(i))) / epsilon);
  });
  return out;
}

ScalarField indicator(const InitialGeometry& geometry, const PeriodicGrid& grid) {
  const InitialGeometry geo = geometry.smoothed(2.0 * grid.h());
  ScalarField out(grid);
  parallel_blocks(grid.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = geo.signed_distance(grid.center(i)) > 0.0 ? 1.0 : 0.0;
  });
  return out;
}

}  // namespace mct
