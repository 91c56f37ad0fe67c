#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>

#include "mct/errors.hpp"
#include "mct/grid.hpp"
#include "mct/measures.hpp"

using namespace mct;

namespace {
constexpr double kPi = std::numbers::pi;
// cos(pi h) sin(2 pi h) / h and -(2/h^2)(1 - cos(2 pi h)) at h = 1/256 (mpmath)
constexpr double kCentralSineCell0 = 6.28208143706608107568;
constexpr double kSineEigenvalue = -39.4764358511204609864;

ScalarField random_field(const PeriodicGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  ScalarField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = U(rng);
  return f;
}

// f shifted by (s0, s1, s2) cells
ScalarField shifted(const ScalarField& f, std::array<int, 3> s) {
  const auto& g = f.grid();
  ScalarField out(g);
  const int n = g.resolution();
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto c = g.coords(i);
    for (int a = 0; a < g.dim(); ++a) c[a] = ((c[a] + s[a]) % n + n) % n;
    out[g.index(c)] = f[i];
  }
  return out;
}
}  // namespace

TEST_CASE("grid validation and geometry") {
  CHECK_THROWS_AS(PeriodicGrid(2, 8), Error);
  CHECK_THROWS_AS(PeriodicGrid(4, 32), Error);
  const PeriodicGrid g(2, 64);
  CHECK(g.h() == 1.0 / 64);
  CHECK(g.size() == 64u * 64u);
  CHECK(g.cell_volume() == doctest::Approx(1.0 / 4096));
  const auto c = g.center(g.index({3, 5, 0}));
  CHECK(c[0] == doctest::Approx(3.5 / 64));
  CHECK(c[1] == doctest::Approx(5.5 / 64));
  CHECK(g.neighbor(g.index({0, 0, 0}), 0, -1) == g.index({63, 0, 0}));
  CHECK(g.neighbor(g.index({0, 63, 0}), 1, 1) == g.index({0, 0, 0}));
}

TEST_CASE("periodic distances use the minimal image") {
  CHECK(periodic_distance({0.05, 0.5, 0}, {0.95, 0.5, 0}, 2) == doctest::Approx(0.1));
  CHECK(periodic_distance({0.1, 0.1, 0.1}, {0.9, 0.9, 0.9}, 3) == doctest::Approx(std::sqrt(3 * 0.04)));
  const Point w = wrap_point({1.25, -0.25, 0}, 2);
  CHECK(w[0] == doctest::Approx(0.25));
  CHECK(w[1] == doctest::Approx(0.75));
}

TEST_CASE("gradient examples") {
  const PeriodicGrid g(2, 256);
  const ScalarField c(g, 3.0);
  const VectorField gc = gradient(c);
  CHECK(gc.max_norm() == 0.0);

  const ScalarField s = sample(g, [](const Point& x) { return std::sin(2 * kPi * x[0]); });
  const VectorField gs = gradient(s);
  CHECK(gs[0][0] == doctest::Approx(kCentralSineCell0).epsilon(1e-12));
  CHECK(std::abs(gs[1][0]) < 1e-12);

  // sawtooth x: slope 1 except at the two cells next to the seam
  const ScalarField saw = sample(g, [](const Point& x) { return x[0]; });
  const VectorField gsaw = gradient(saw);
  for (int i = 0; i < 256; ++i) {
    const double v = gsaw[0][g.index({i, 7, 0})];
    if (i == 0 || i == 255)
      CHECK(v < 0.0);
    else
      CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("laplacian examples") {
  const PeriodicGrid g(2, 256);
  CHECK(laplacian(ScalarField(g, -2.5)).max_abs() == 0.0);
  const ScalarField s = sample(g, [](const Point& x) { return std::sin(2 * kPi * x[0]); });
  const ScalarField ls = laplacian(s);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(ls[i] - kSineEigenvalue * s[i]));
  CHECK(worst < 1e-9);
  const ScalarField r = random_field(g, 7);
  CHECK(std::abs(laplacian(r).integral()) < 1e-9);
}

TEST_CASE("stencils commute with lattice translations") {
  for (int dim : {1, 2, 3}) {
    const PeriodicGrid g(dim, dim == 3 ? 16 : 32);
    const ScalarField f = random_field(g, 11 + dim);
    const std::array<int, 3> s{3, -5, 2};
    const ScalarField a = shifted(laplacian(f), s), b = laplacian(shifted(f, s));
    const ScalarField c = shifted(gradient_norm_squared(f), s), d = gradient_norm_squared(shifted(f, s));
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(a[i] == b[i]);
      CHECK(c[i] == d[i]);
    }
  }
}

TEST_CASE("laplacian equals backward divergence of the forward gradient") {
  const PeriodicGrid g(2, 128);
  const ScalarField f = sample(g, [](const Point& x) {
    return std::sin(2 * kPi * x[0]) * std::cos(4 * kPi * x[1]) + 0.3 * std::cos(2 * kPi * (x[0] + x[1]));
  });
  const ScalarField a = laplacian(f), b = divergence_backward(forward_gradient(f));
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  CHECK(worst <= 1e-12 * std::max(1.0, a.max_abs()) * 1e3);
  CHECK(worst <= 1e-9);
}

TEST_CASE("ball_cells examples") {
  const PeriodicGrid g(2, 64);
  const double h = g.h();
  // tiny ball between cell centers
  CHECK(ball_cells(g, {0.0, 0.0, 0}, 0.4 * h).empty());
  const Point c = g.center(g.index({10, 20, 0}));
  // strict inclusion: radius 1.5h also takes the diagonals at sqrt(2) h
  CHECK(ball_cells(g, c, 1.5 * h).size() == 9u);
  // between h and sqrt(2) h: the 5-cell plus stencil
  const auto plus = ball_cells(g, c, 1.2 * h);
  CHECK(plus.size() == 5u);
  for (std::size_t k : plus) CHECK(periodic_distance(g.center(k), c, 2) <= h * 1.0000001);
  CHECK_THROWS_AS(ball_cells(g, c, 0.51), Error);
}

TEST_CASE("ball volume against the continuum") {
  for (int dim : {2, 3}) {
    const PeriodicGrid g(dim, dim == 2 ? 128 : 32);
    const double h = g.h(), r = 0.5 - h;
    const double cont = unit_ball_volume(dim) * std::pow(r, dim);
    for (const Point& c : {Point{0.5, 0.5, 0.5}, Point{0.123, 0.77, 0.31}}) {
      const double vol = ball_cells(g, c, r).size() * g.cell_volume();
      CHECK(vol >= cont * (1 - 4 * h / r));
      CHECK(vol <= cont * (1 + 4 * h / r));
    }
  }
}

TEST_CASE("ball_cells respects the torus reflections") {
  const PeriodicGrid g(2, 64);
  const Point c = g.center(g.index({5, 60, 0}));
  auto key = [&](std::size_t i, bool fx, bool fy) {
    auto q = g.coords(i);
    const auto cc = g.coords(g.index({5, 60, 0}));
    if (fx) q[0] = (2 * cc[0] - q[0] + 64) % 64;
    if (fy) q[1] = (2 * cc[1] - q[1] + 64) % 64;
    return g.index(q);
  };
  for (double r : {0.07, 0.19, 0.33}) {
    auto cells = ball_cells(g, c, r);
    for (bool fx : {false, true})
      for (bool fy : {false, true}) {
        std::vector<std::size_t> m;
        for (auto i : cells) m.push_back(key(i, fx, fy));
        std::sort(m.begin(), m.end());
        CHECK(m == cells);
      }
  }
}

TEST_CASE("cell ball prefix sums match direct summation") {
  const PeriodicGrid g(2, 64);
  const ScalarField f = random_field(g, 3);
  const RowPrefix pre(f);
  for (double r : {0.05, 0.21, 0.4}) {
    const CellBall ball(g, r);
    for (std::size_t idx : {std::size_t{0}, std::size_t{777}, g.size() - 1}) {
      double direct = 0.0;
      for (auto k : ball_cells(g, g.center(idx), r)) direct += f[k];
      CHECK(ball.sum(pre, idx) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("field dumps round-trip") {
  const PeriodicGrid g(3, 16);
  const ScalarField f = random_field(g, 5);
  const auto path = (std::filesystem::temp_directory_path() / "mct_test_dump.pfmf").string();
  write_field_dump(path, f, 0.125, 0.0375);
  const FieldDump d = read_field_dump(path);
  CHECK(d.dim == 3u);
  CHECK(d.resolution == 16u);
  CHECK(d.epsilon == 0.125);
  CHECK(d.time == 0.0375);
  const ScalarField back = field_from_dump(d);
  CHECK(back.data() == f.data());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_field_dump(path), Error);
}

TEST_CASE("fields stay finite") {
  const PeriodicGrid g(2, 32);
  ScalarField f(g, 1.0);
  CHECK(f.all_finite());
  f[5] = std::nan("");
  CHECK_FALSE(f.all_finite());
}
