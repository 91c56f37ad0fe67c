#include "mct/interface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <unordered_map>

#include "marching_tables.hpp"
#include "mct/errors.hpp"

namespace mct {

namespace {

constexpr double kZeroNudge = 1e-12;

double wrap_half(double v) { return v - std::floor(v + 0.5); }

double node_value(const ScalarField& phi, std::size_t i) {
  const double v = phi[i];
  return v == 0.0 ? kZeroNudge : v;
}

// Vertex on the lattice edge from node `node` one step along `axis`.
class VertexTable {
 public:
  VertexTable(const ScalarField& phi, InterfaceMesh& mesh) : phi_(phi), mesh_(mesh) {}

  std::size_t get(std::size_t node, int axis) {
    const std::size_t key = node * 3 + static_cast<std::size_t>(axis);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    const auto& g = phi_.grid();
    const std::size_t other = g.neighbor(node, axis, +1);
    const double a = node_value(phi_, node), b = node_value(phi_, other);
    const double t = a / (a - b);
    Point x = g.center(node);
    x[axis] += t * g.h();
    x = wrap_point(x, g.dim());
    const std::size_t id = mesh_.vertices.size();
    mesh_.vertices.push_back(x);
    ids_.emplace(key, id);
    return id;
  }

 private:
  const ScalarField& phi_;
  InterfaceMesh& mesh_;
  std::unordered_map<std::size_t, std::size_t> ids_;
};

double seg_length(const Point& a, const Point& b, int dim) { return periodic_distance(a, b, dim); }

void build_loops(InterfaceMesh& mesh) {
  const std::size_t nv = mesh.vertices.size();
  std::vector<std::array<std::size_t, 2>> adj(nv, {SIZE_MAX, SIZE_MAX});
  for (const auto& s : mesh.segments) {
    for (int k = 0; k < 2; ++k) {
      auto& slot = adj[s[k]];
      const std::size_t other = s[1 - k];
      if (slot[0] == SIZE_MAX) {
        slot[0] = other;
      } else if (slot[1] == SIZE_MAX) {
        slot[1] = other;
      } else {
        throw Error(ErrorCode::InvalidGeometry, "interface vertex with degree above 2");
      }
    }
  }
  for (const auto& a : adj)
    if (a[1] == SIZE_MAX) throw Error(ErrorCode::InvalidGeometry, "interface vertex with degree below 2");
  std::vector<char> seen(nv, 0);
  for (std::size_t start = 0; start < nv; ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> loop;
    std::size_t prev = SIZE_MAX, cur = start;
    while (!seen[cur]) {
      seen[cur] = 1;
      loop.push_back(cur);
      const std::size_t next = adj[cur][0] != prev ? adj[cur][0] : adj[cur][1];
      prev = cur;
      cur = next;
    }
    mesh.components.push_back(std::move(loop));
  }
}

void marching_squares(const ScalarField& phi, InterfaceMesh& mesh) {
  const auto& g = phi.grid();
  const int n = g.resolution();
  VertexTable vt(phi, mesh);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t c[4] = {g.index({i, j, 0}), g.index({i + 1, j, 0}), g.index({i + 1, j + 1, 0}),
                                g.index({i, j + 1, 0})};
      double v[4];
      int mask = 0;
      for (int k = 0; k < 4; ++k) {
        v[k] = node_value(phi, c[k]);
        if (v[k] > 0.0) mask |= 1 << k;
      }
      if (mask == 0 || mask == 15) continue;
      // edges: 0 c0-c1 (axis 0), 1 c1-c2 (axis 1), 2 c3-c2 (axis 0), 3 c0-c3 (axis 1)
      auto edge = [&](int e) -> std::size_t {
        switch (e) {
          case 0: return vt.get(c[0], 0);
          case 1: return vt.get(c[1], 1);
          case 2: return vt.get(c[3], 0);
          default: return vt.get(c[0], 1);
        }
      };
      auto cross = [&](int e) {
        static constexpr int ends[4][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}};
        return (v[ends[e][0]] > 0.0) != (v[ends[e][1]] > 0.0);
      };
      int crossing[4], nc = 0;
      for (int e = 0; e < 4; ++e)
        if (cross(e)) crossing[nc++] = e;
      if (nc == 2) {
        mesh.segments.push_back({edge(crossing[0]), edge(crossing[1])});
      } else {
        // saddle: cut off the corners whose sign differs from the cell average
        const bool center_pos = (v[0] + v[1] + v[2] + v[3]) > 0.0;
        // corner k is bounded by edges (k - 1) mod 4 ... use explicit pairs
        static constexpr int corner_edges[4][2] = {{3, 0}, {0, 1}, {1, 2}, {2, 3}};
        for (int k = 0; k < 4; ++k)
          if ((v[k] > 0.0) != center_pos)
            mesh.segments.push_back({edge(corner_edges[k][0]), edge(corner_edges[k][1])});
      }
    }
  for (const auto& s : mesh.segments) mesh.measure += seg_length(mesh.vertices[s[0]], mesh.vertices[s[1]], 2);
  build_loops(mesh);
}

void marching_cubes(const ScalarField& phi, InterfaceMesh& mesh) {
  const auto& g = phi.grid();
  const int n = g.resolution();
  static constexpr int corner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                       {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  static constexpr int edge_ends[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                                           {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
  VertexTable vt(phi, mesh);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        std::size_t c[8];
        double v[8];
        int index = 0;
        for (int q = 0; q < 8; ++q) {
          c[q] = g.index({i + corner[q][0], j + corner[q][1], k + corner[q][2]});
          v[q] = node_value(phi, c[q]);
          if (v[q] < 0.0) index |= 1 << q;
        }
        if (index == 0 || index == 255) continue;
        auto edge = [&](int e) {
          const int a = edge_ends[e][0], b = edge_ends[e][1];
          int axis = 0;
          while (corner[a][axis] == corner[b][axis]) ++axis;
          const int lo = corner[a][axis] < corner[b][axis] ? a : b;
          return vt.get(c[lo], axis);
        };
        const auto& row = detail::kTriTable[index];
        for (int t = 0; t < 16 && row[t] != -1; t += 3)
          mesh.triangles.push_back({edge(row[t]), edge(row[t + 1]), edge(row[t + 2])});
      }
  for (const auto& t : mesh.triangles) {
    const Point& a = mesh.vertices[t[0]];
    const Point u = periodic_delta(a, mesh.vertices[t[1]], 3);
    const Point w = periodic_delta(a, mesh.vertices[t[2]], 3);
    const double cx = u[1] * w[2] - u[2] * w[1], cy = u[2] * w[0] - u[0] * w[2], cz = u[0] * w[1] - u[1] * w[0];
    mesh.measure += 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
  }
  // connected patches by union-find over triangle edges
  std::vector<std::size_t> parent(mesh.vertices.size());
  for (std::size_t q = 0; q < parent.size(); ++q) parent[q] = q;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& t : mesh.triangles) {
    const std::size_t r0 = find(t[0]);
    parent[find(t[1])] = r0;
    parent[find(t[2])] = r0;
  }
  std::unordered_map<std::size_t, std::size_t> comp;
  for (std::size_t q = 0; q < parent.size(); ++q) {
    const std::size_t r = find(q);
    auto it = comp.find(r);
    if (it == comp.end()) {
      it = comp.emplace(r, mesh.components.size()).first;
      mesh.components.emplace_back();
    }
    mesh.components[it->second].push_back(q);
  }
}

double circular_mean(const std::vector<Point>& pts, const std::vector<std::size_t>& ids, int axis) {
  double s = 0.0, c = 0.0;
  for (std::size_t id : ids) {
    const double a = 2.0 * std::numbers::pi * pts[id][axis];
    s += std::sin(a);
    c += std::cos(a);
  }
  double m = std::atan2(s, c) / (2.0 * std::numbers::pi);
  return m - std::floor(m);
}

// Solves the small dense system A x = b in place (Gaussian elimination, partial pivoting).
template <int N>
bool solve_dense(std::array<std::array<double, N>, N> A, std::array<double, N>& b) {
  for (int col = 0; col < N; ++col) {
    int piv = col;
    for (int r = col + 1; r < N; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (A[piv][col] == 0.0) return false;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < N; ++r) {
      const double f = A[r][col] / A[col][col];
      for (int k = col; k < N; ++k) A[r][k] -= f * A[col][k];
      b[r] -= f * b[col];
    }
  }
  for (int r = N - 1; r >= 0; --r) {
    for (int k = r + 1; k < N; ++k) b[r] -= A[r][k] * b[k];
    b[r] /= A[r][r];
  }
  return true;
}

// Algebraic (Kasa) fit then Gauss-Newton on |p - c| - r, in unwrapped coordinates.
template <int D>
CircleFit fit_ball(const std::vector<Point>& pts) {
  constexpr int N = D + 1;
  std::array<std::array<double, N>, N> A{};
  std::array<double, N> b{};
  for (const auto& p : pts) {
    std::array<double, N> row{};
    double r2 = 0.0;
    for (int a = 0; a < D; ++a) {
      row[a] = p[a];
      r2 += p[a] * p[a];
    }
    row[D] = 1.0;
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) A[i][j] += row[i] * row[j];
      b[i] -= row[i] * r2;
    }
  }
  if (!solve_dense<N>(A, b)) throw Error(ErrorCode::InvalidGeometry, "degenerate fit");
  Point c{0.0, 0.0, 0.0};
  double rr = 0.0;
  for (int a = 0; a < D; ++a) {
    c[a] = -0.5 * b[a];
    rr += c[a] * c[a];
  }
  double r = std::sqrt(std::max(0.0, rr - b[D]));
  for (int it = 0; it < 20; ++it) {
    std::array<std::array<double, N>, N> JtJ{};
    std::array<double, N> Jtr{};
    for (const auto& p : pts) {
      double d2 = 0.0;
      for (int a = 0; a < D; ++a) d2 += (p[a] - c[a]) * (p[a] - c[a]);
      const double d = std::sqrt(d2);
      if (d == 0.0) continue;
      std::array<double, N> J{};
      for (int a = 0; a < D; ++a) J[a] = -(p[a] - c[a]) / d;
      J[D] = -1.0;
      const double res = d - r;
      for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) JtJ[i][j] += J[i] * J[j];
        Jtr[i] -= J[i] * res;
      }
    }
    if (!solve_dense<N>(JtJ, Jtr)) break;
    double step = 0.0;
    for (int a = 0; a < D; ++a) {
      c[a] += Jtr[a];
      step = std::max(step, std::abs(Jtr[a]));
    }
    r += Jtr[D];
    step = std::max(step, std::abs(Jtr[D]));
    if (step < 1e-15) break;
  }
  double ss = 0.0;
  for (const auto& p : pts) {
    double d2 = 0.0;
    for (int a = 0; a < D; ++a) d2 += (p[a] - c[a]) * (p[a] - c[a]);
    const double res = std::sqrt(d2) - r;
    ss += res * res;
  }
  CircleFit f;
  f.center = wrap_point(c, D);
  f.radius = r;
  f.rms_residual = pts.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(pts.size()));
  return f;
}

}  // namespace

InterfaceMesh extract_interface(const ScalarField& phi) {
  const auto& g = phi.grid();
  if (g.dim() < 2) throw Error(ErrorCode::InvalidGeometry, "interface extraction needs dim 2 or 3");
  bool pos = false, neg = false;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (node_value(phi, i) > 0.0) pos = true;
    else neg = true;
  }
  if (!pos || !neg) throw Error(ErrorCode::NoInterface, "phase field has a single sign");
  InterfaceMesh mesh;
  mesh.dim = g.dim();
  if (g.dim() == 2) marching_squares(phi, mesh);
  else marching_cubes(phi, mesh);
  return mesh;
}

CircleFit fit_circle(const InterfaceMesh& mesh) {
  if (mesh.dim != 2) throw Error(ErrorCode::InvalidGeometry, "fit_circle needs a dim 2 mesh");
  if (mesh.components.size() != 1)
    throw Error(ErrorCode::MultipleLoops, "expected one loop, found " + std::to_string(mesh.components.size()));
  const auto& loop = mesh.components.front();
  std::vector<Point> pts;
  pts.reserve(loop.size());
  Point cur = mesh.vertices[loop.front()];
  pts.push_back(cur);
  for (std::size_t k = 1; k < loop.size(); ++k) {
    const Point d = periodic_delta(cur, mesh.vertices[loop[k]], 2);
    cur = {cur[0] + d[0], cur[1] + d[1], 0.0};
    pts.push_back(cur);
  }
  return fit_ball<2>(pts);
}

CircleFit fit_sphere(const InterfaceMesh& mesh) {
  if (mesh.dim != 3) throw Error(ErrorCode::InvalidGeometry, "fit_sphere needs a dim 3 mesh");
  if (mesh.components.size() != 1)
    throw Error(ErrorCode::MultipleLoops, "expected one patch, found " + std::to_string(mesh.components.size()));
  const auto& ids = mesh.components.front();
  Point m{};
  for (int a = 0; a < 3; ++a) m[a] = circular_mean(mesh.vertices, ids, a);
  std::vector<Point> pts;
  pts.reserve(ids.size());
  for (std::size_t id : ids) {
    Point p{};
    for (int a = 0; a < 3; ++a) p[a] = m[a] + wrap_half(mesh.vertices[id][a] - m[a]);
    pts.push_back(p);
  }
  return fit_ball<3>(pts);
}

std::vector<double> component_positions(const InterfaceMesh& mesh, int axis) {
  std::vector<double> out;
  for (const auto& c : mesh.components) out.push_back(circular_mean(mesh.vertices, c, axis));
  return out;
}

DensityEstimate density_estimate(const MeasureField& m, double sigma, const Point& center, double radius) {
  if (radius < 5.0 * m.epsilon * (1.0 - 1e-12)) throw Error(ErrorCode::RadiusTooSmall, "density radius below 5 eps");
  if (radius > 0.25) throw Error(ErrorCode::RadiusTooLarge, "density radius above 1/4");
  const int dim = m.grid().dim();
  DensityEstimate d;
  d.center = center;
  d.radius = radius;
  d.theta_hat = ball_measure(m, center, radius) / (sigma * unit_ball_volume(dim - 1) * std::pow(radius, dim - 1));
  d.nearest_integer = static_cast<int>(std::lround(d.theta_hat));
  d.deviation = d.theta_hat - d.nearest_integer;
  return d;
}

void write_interface_csv(const std::string& path, const InterfaceMesh& mesh) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path);
  os << (mesh.dim == 3 ? "component,x,y,z\n" : "component,x,y\n");
  char buf[128];
  for (std::size_t c = 0; c < mesh.components.size(); ++c)
    for (std::size_t id : mesh.components[c]) {
      const Point& p = mesh.vertices[id];
      if (mesh.dim == 3) std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", c, p[0], p[1], p[2]);
      else std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", c, p[0], p[1]);
      os << buf;
    }
}

}  // namespace mct
