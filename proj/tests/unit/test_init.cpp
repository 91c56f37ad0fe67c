#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mct/errors.hpp"
#include "mct/init.hpp"
#include "mct/measures.hpp"

using namespace mct;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTanhSqrt2 = 0.888385561585660544953;
// sigma * 2 pi * 0.25 for the quartic well (mpmath)
constexpr double kCircleEnergy = 2.96192195877224416468;

const Profile& quartic_profile() {
  static const Profile p = standing_wave(make_quartic_well());
  return p;
}

double energy_error(const InitialGeometry& g, double eps, int res) {
  const PeriodicGrid grid(2, res);
  const Profile& p = quartic_profile();
  const PhaseField f = build_initial_field(g, p, eps, grid);
  const double target = p.sigma() * g.boundary_measure();
  return std::abs(total_energy(f, p.well()) - target) / target;
}

InitialGeometry circle() { return InitialGeometry::circle({0.5, 0.5, 0}, 0.25); }
InitialGeometry two_circles() { return InitialGeometry::two_circles({0.3, 0.3, 0}, 0.15, {0.7, 0.7, 0}, 0.12); }
InitialGeometry annulus() { return InitialGeometry::annulus({0.5, 0.5, 0}, 0.125, 0.375); }

// eps/h = 2, 4, 8 with eps shrinking
struct Rung {
  double eps;
  int res;
};
constexpr Rung kLadder[] = {{1.0 / 32, 64}, {1.0 / 48, 192}, {1.0 / 64, 512}};
}  // namespace

TEST_CASE("signed distance examples") {
  const InitialGeometry c = circle();
  CHECK(c.signed_distance({0.5, 0.5, 0}) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(c.signed_distance({0.75, 0.5, 0})) < 1e-15);
  CHECK(c.signed_distance({0.0, 0.5, 0}) == doctest::Approx(-0.25));
  // minimal image: x = 0.95 is 0.45 away from the center, not 0.55
  CHECK(c.signed_distance({0.95, 0.5, 0}) == doctest::Approx(-0.2));

  const InitialGeometry two = InitialGeometry::two_circles({0.3, 0.5, 0}, 0.15, {0.7, 0.5, 0}, 0.15);
  CHECK(two.signed_distance({0.5, 0.5, 0}) == doctest::Approx(-0.05).epsilon(1e-14));
  CHECK(two.signed_distance({0.3, 0.5, 0}) == doctest::Approx(0.15));

  const InitialGeometry a = annulus();
  CHECK(a.signed_distance({0.5, 0.5, 0}) == doctest::Approx(-0.125));
  CHECK(a.signed_distance({0.75, 0.5, 0}) == doctest::Approx(0.125));

  const InitialGeometry s = InitialGeometry::sphere({0.5, 0.5, 0.5}, 0.25);
  CHECK(s.signed_distance({0.5, 0.5, 0.5}) == doctest::Approx(0.25));
  CHECK(s.signed_distance({0.5, 0.5, 0.85}) == doctest::Approx(-0.1));

  const InitialGeometry slab = InitialGeometry::graph(2, 0.25, {0.75});
  CHECK(slab.signed_distance({0.3, 0.7, 0}) == doctest::Approx(0.05));
  CHECK(slab.signed_distance({0.9, 0.1, 0}) == doctest::Approx(-0.15));
}

TEST_CASE("graph distance with a curved height function") {
  std::vector<double> hs(64);
  for (std::size_t j = 0; j < hs.size(); ++j) hs[j] = 0.6 + 0.05 * std::sin(2 * kPi * j / 64.0);
  const InitialGeometry g = InitialGeometry::graph(2, 0.2, hs);
  // point straight above a crest: the nearest curve point is the crest itself
  const double y = 0.25;
  const double top = g.height(y);
  CHECK(top == doctest::Approx(0.65).epsilon(1e-4));
  CHECK(g.signed_distance({top - 0.01, y, 0}) == doctest::Approx(0.01).epsilon(1e-6));
  CHECK(g.signed_distance({top + 0.01, y, 0}) == doctest::Approx(-0.01).epsilon(1e-6));
  CHECK(g.boundary_measure() > 2.0);
  CHECK(g.volume() == doctest::Approx(0.4).epsilon(1e-6));
}

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(InitialGeometry::circle({0.5, 0.5, 0}, 0.46), Error);
  CHECK_THROWS_AS(InitialGeometry::circle({0.5, 0.5, 0}, 0.0), Error);
  CHECK_THROWS_AS(InitialGeometry::two_circles({0.3, 0.5, 0}, 0.2, {0.6, 0.5, 0}, 0.15), Error);
  CHECK_THROWS_AS(InitialGeometry::annulus({0.5, 0.5, 0}, 0.3, 0.2), Error);
  CHECK_THROWS_AS(InitialGeometry::graph(2, 0.1, {0.15}), Error);
  CHECK_THROWS_AS(InitialGeometry::graph(3, 0.1, {0.5}), Error);
}

TEST_CASE("closed-form reach, boundary measure and volume") {
  CHECK(circle().reach() == doctest::Approx(0.25));
  CHECK(circle().boundary_measure() == doctest::Approx(0.5 * kPi));
  CHECK(circle().volume() == doctest::Approx(kPi / 16));
  CHECK(two_circles().reach() == doctest::Approx(0.12));
  CHECK(annulus().reach() == doctest::Approx(0.125));
  CHECK(annulus().boundary_measure() == doctest::Approx(kPi));
}

TEST_CASE("truncation shape") {
  const double r = 0.3;
  const Truncation h(r);
  for (int k = -200; k <= 200; ++k) {
    const double d = k * 0.002;
    CHECK(h(-d) == doctest::Approx(-h(d)).epsilon(1e-15));
    const double s = h.slope(d);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    if (std::abs(d) <= r / 3) CHECK(h(d) == doctest::Approx(d).epsilon(1e-15));
    if (std::abs(d) >= 2 * r / 3) CHECK(std::abs(h(d)) == doctest::Approx(r / 2).epsilon(1e-15));
  }
  // continuity at both joins
  CHECK(h(r / 3 + 1e-12) == doctest::Approx(r / 3).epsilon(1e-10));
  CHECK(h(2 * r / 3 - 1e-12) == doctest::Approx(r / 2).epsilon(1e-10));
  // slope matches a centered difference in the blend region
  for (double d : {0.11, 0.13, 0.15, 0.17, 0.19}) {
    const double fd = (h(d + 1e-6) - h(d - 1e-6)) / 2e-6;
    CHECK(h.slope(d) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("initial field samples the profile of the truncated distance") {
  const PeriodicGrid grid(2, 256);
  const double hh = grid.h();
  const double eps = 4 * hh;
  // slab edge halfway between cells so that some cell centers sit at d = 0 and d = eps
  const InitialGeometry slab = InitialGeometry::graph(2, 60.5 * hh, {0.75 + 0.5 * hh});
  const PhaseField f = build_initial_field(slab, quartic_profile(), eps, grid);
  const std::size_t on_edge = grid.index({60, 10, 0});
  const std::size_t one_eps = grid.index({64, 10, 0});
  CHECK(std::abs(f.phi[on_edge]) < 1e-14);
  CHECK(f.phi[one_eps] == doctest::Approx(kTanhSqrt2).epsilon(1e-13));
  CHECK(f.phi.max_abs() < 1.0);

  // zero level set within one cell of the circle
  const InitialGeometry c = circle();
  const PhaseField g = build_initial_field(c, quartic_profile(), eps, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = c.signed_distance(grid.center(i));
    if (std::abs(d) > hh) CHECK((g.phi[i] > 0) == (d > 0));
  }
}

TEST_CASE("initial positive discrepancy stays below eps^-beta") {
  const PeriodicGrid grid(2, 256);
  const double eps = 4 * grid.h();
  for (const InitialGeometry& g : {circle(), two_circles(), annulus()}) {
    const PhaseField f = build_initial_field(g, quartic_profile(), eps, grid);
    const MeasureField m = energy_and_discrepancy(f, quartic_profile().well());
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) sup = std::max(sup, m.xi[i]);
    CHECK(sup <= std::pow(eps, -0.25));
  }
}

TEST_CASE("preconditions on eps") {
  const PeriodicGrid grid(2, 256);
  const Profile& p = quartic_profile();
  try {
    build_initial_field(circle(), p, 1.5 * grid.h(), grid);
    FAIL("expected EpsilonGridMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EpsilonGridMismatch);
  }
  try {
    build_initial_field(circle(), p, 0.1, grid);
    FAIL("expected TruncationTooTight");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TruncationTooTight);
  }
  CHECK_NOTHROW(build_initial_field(circle(), p, 2 * grid.h(), grid));
  CHECK_NOTHROW(build_initial_field(circle(), p, 0.05, grid, 0.2));
}

TEST_CASE("circle energy concentrates on sigma times the perimeter") {
  const PeriodicGrid grid(2, 256);
  const Profile& p = quartic_profile();
  const PhaseField f = build_initial_field(circle(), p, 4 * grid.h(), grid);
  CHECK(total_energy(f, p.well()) == doctest::Approx(kCircleEnergy).epsilon(0.02));
  CHECK(p.sigma() * circle().boundary_measure() == doctest::Approx(kCircleEnergy).epsilon(1e-14));
  CHECK(energy_error(two_circles(), 4.0 / 256, 256) < 0.02);
  CHECK(energy_error(annulus(), 4.0 / 256, 256) < 0.02);
}

TEST_CASE("energy error decreases along the co-refined eps ladder") {
  for (const InitialGeometry& g : {circle(), two_circles(), annulus()}) {
    double prev = INFINITY;
    for (const Rung& r : kLadder) {
      const double err = energy_error(g, r.eps, r.res);
      CHECK(err < prev);
      prev = err;
    }
  }
}

TEST_CASE("initial discrepancy mass decreases along the ladder") {
  const Profile& p = quartic_profile();
  const InitialGeometry c = circle();
  double prev = INFINITY;
  for (const Rung& r : kLadder) {
    const PeriodicGrid grid(2, r.res);
    const MeasureField m = energy_and_discrepancy(build_initial_field(c, p, r.eps, grid), p.well());
    const double l1 = discrepancy_l1(m);
    CHECK(l1 < prev);
    CHECK(l1 <= std::sqrt(r.eps) * c.boundary_measure());
    prev = l1;
  }
}

TEST_CASE("phase indicator converges in L1 at rate eps") {
  const PeriodicGrid grid(2, 256);
  const Profile& p = quartic_profile();
  const InitialGeometry c = circle();
  const ScalarField chi = indicator(c, grid);
  double prev = INFINITY;
  for (double k : {8.0, 4.0, 2.0}) {
    const double eps = k * grid.h();
    const PhaseField f = build_initial_field(c, p, eps, grid);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) err += std::abs(0.5 * (1 + f.phi[i]) - chi[i]);
    err *= grid.cell_volume();
    CHECK(err < prev);
    CHECK(err <= eps);
    prev = err;
  }
}

TEST_SUITE("expected_red") {
  // At fixed resolution the lattice error O((h/eps)^2) outgrows the O(eps) gain.
  TEST_CASE("energy error decreases over eps 8h 4h 2h at resolution 256") {
    double prev = INFINITY;
    for (double k : {8.0, 4.0, 2.0}) {
      const double err = energy_error(circle(), k / 256, 256);
      MESSAGE("eps = " << k << "h: relative energy error " << err);
      CHECK(err < prev);
      prev = err;
    }
  }
}
