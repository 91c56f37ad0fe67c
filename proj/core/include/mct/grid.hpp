#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mct {

using Point = std::array<double, 3>;

/// Uniform periodic lattice on the unit torus T^dim. Cell i along an axis has
/// its center at (i + 1/2) h. Storage is row-major: axis 0 varies slowest.
class PeriodicGrid {
 public:
  PeriodicGrid() = default;
  PeriodicGrid(int dim, int resolution);

  int dim() const { return dim_; }
  int resolution() const { return n_; }
  double h() const { return h_; }
  std::size_t size() const { return size_; }
  /// h^dim, the quadrature weight of one cell.
  double cell_volume() const { return cell_volume_; }
  /// Extents padded to three axes; unused leading axes have extent 1.
  const std::array<int, 3>& shape() const { return shape_; }
  /// Linear stride of grid axis `axis` (0 <= axis < dim).
  std::size_t stride(int axis) const { return strides_[axis]; }

  std::size_t index(const std::array<int, 3>& c) const;
  std::array<int, 3> coords(std::size_t idx) const;
  Point center(std::size_t idx) const;

  /// Index of the neighbour one step along `axis` (+1 or -1), with wrap.
  std::size_t neighbor(std::size_t idx, int axis, int step) const;

  bool operator==(const PeriodicGrid& o) const { return dim_ == o.dim_ && n_ == o.n_; }
  bool operator!=(const PeriodicGrid& o) const { return !(*this == o); }

 private:
  int dim_ = 0;
  int n_ = 0;
  double h_ = 0.0;
  double cell_volume_ = 0.0;
  std::size_t size_ = 0;
  std::array<int, 3> shape_{1, 1, 1};
  std::array<std::size_t, 3> strides_{0, 0, 0};
};

/// Minimal-image displacement b - a on the torus, per component in [-1/2, 1/2).
Point periodic_delta(const Point& a, const Point& b, int dim);
double periodic_distance(const Point& a, const Point& b, int dim);
/// Wraps each used coordinate into [0, 1).
Point wrap_point(const Point& p, int dim);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const PeriodicGrid& grid, double fill = 0.0)
      : grid_(grid), data_(grid.size(), fill) {}
  ScalarField(const PeriodicGrid& grid, std::vector<double> data);

  const PeriodicGrid& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool all_finite() const;
  /// Deterministic h^dim * sum of values.
  double integral() const;
  double max_abs() const;

 private:
  PeriodicGrid grid_;
  std::vector<double> data_;
};

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const PeriodicGrid& grid, double fill = 0.0);
  explicit VectorField(std::vector<ScalarField> components);

  const PeriodicGrid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  ScalarField& operator[](int k) { return comps_[k]; }
  const ScalarField& operator[](int k) const { return comps_[k]; }
  /// Euclidean norm at a cell.
  double norm_at(std::size_t i) const;
  double max_norm() const;

 private:
  PeriodicGrid grid_;
  std::vector<ScalarField> comps_;
};

/// A scalar order parameter paired with its interface width.
struct PhaseField {
  ScalarField phi;
  double epsilon = 0.0;
};

/// Fills a field by evaluating f at every cell center.
template <class F>
ScalarField sample(const PeriodicGrid& grid, F&& f) {
  ScalarField out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = f(grid.center(i));
  return out;
}

// ---- difference operators (all periodic, second order where centered) ----

/// Centered difference (f(x+h) - f(x-h)) / 2h along every axis.
VectorField gradient(const ScalarField& f);
/// One-sided differences: forward (f(x+h) - f(x))/h or backward (f(x) - f(x-h))/h.
ScalarField forward_difference(const ScalarField& f, int axis);
ScalarField backward_difference(const ScalarField& f, int axis);
/// Divergence with backward differences; adjoint-matched to forward_difference,
/// so divergence_backward(forward gradient) is exactly the laplacian.
ScalarField divergence_backward(const VectorField& v);
ScalarField divergence_central(const VectorField& v);
/// (2 dim + 1)-point Laplacian.
ScalarField laplacian(const ScalarField& f);
/// Forward-difference gradient, staggered to cell faces.
VectorField forward_gradient(const ScalarField& f);

/// |grad f|^2 as the mean of squared forward and backward differences per axis.
/// Its cell sum equals the sum of squared forward differences, whose
/// variational derivative is the (2 dim + 1)-point Laplacian.
ScalarField gradient_norm_squared(const ScalarField& f);

/// Cells whose centers lie at periodic distance < r from `center`, ascending
/// index order. Throws RadiusTooLarge for r > 1/2.
std::vector<std::size_t> ball_cells(const PeriodicGrid& grid, const Point& center, double r);

/// Precomputed ball of radius r around a cell center, stored as rows along the
/// last axis so that ball sums reduce to prefix-sum differences.
class CellBall {
 public:
  CellBall(const PeriodicGrid& grid, double r);
  double radius() const { return r_; }
  std::size_t cell_count() const { return count_; }

  /// Sum of `values` over the ball centred at cell `center`, using per-row
  /// prefix sums from `RowPrefix`.
  double sum(const class RowPrefix& prefix, std::size_t center) const;

 private:
  struct Row {
    int d0, d1;  // offsets along the leading padded axes
    int half;    // half-width along the last axis
  };
  PeriodicGrid grid_;
  double r_;
  std::size_t count_ = 0;
  std::vector<Row> rows_;
};

/// Prefix sums of a field along the last (fastest) axis.
class RowPrefix {
 public:
  explicit RowPrefix(const ScalarField& f);
  /// Sum of row `row` over the cyclic index range [a, b] (inclusive, may wrap).
  double range(std::size_t row, int a, int b) const;
  int n() const { return n_; }

 private:
  int n_;
  std::vector<double> p_;  // (rows) x (n + 1)
};

// ---- raw field dumps ----

struct FieldDump {
  std::uint32_t dim = 0;
  std::uint32_t resolution = 0;
  double epsilon = 0.0;
  double time = 0.0;
  std::vector<double> values;
};

/// Little-endian "PFMF" dump: magic, u32 dim, u32 resolution, f64 epsilon,
/// f64 time, then resolution^dim f64 values in row-major order.
void write_field_dump(const std::string& path, const ScalarField& f, double epsilon, double time);
FieldDump read_field_dump(const std::string& path);
ScalarField field_from_dump(const FieldDump& d);

}  // namespace mct
