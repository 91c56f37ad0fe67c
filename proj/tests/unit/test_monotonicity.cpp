#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mct/errors.hpp"
#include "mct/measures.hpp"
#include "mct/monotonicity.hpp"

using namespace mct;

namespace {
constexpr double kPi = std::numbers::pi;
// e^{-1} / sqrt(0.04 pi): s - t = 0.01, |x - y| = 0.2, eta(0.2) = 1 (mpmath)
constexpr double kKernel02 = 1.0377687435514867583;
// 1 - S(0.2) with S(t) = 6t^5 - 15t^4 + 10t^3, i.e. eta(0.3)
constexpr double kEta03 = 0.94208;

const Profile& quartic_profile() {
  static const Profile p = standing_wave(make_quartic_well());
  return p;
}

MeasureField sheet_measure(const PeriodicGrid& g, double eps, double a = 0.25) {
  const Profile& p = quartic_profile();
  const PhaseField f{
      sample(g, [&](const Point& x) { return p.psi((x[0] - a) / eps) - p.psi((x[0] - a - 0.5) / eps) - 1.0; }), eps};
  return energy_and_discrepancy(f, p.well());
}
}  // namespace

TEST_CASE("cutoff bump") {
  CHECK(cutoff_eta(0.0) == 1.0);
  CHECK(cutoff_eta(0.25) == 1.0);
  CHECK(cutoff_eta(0.2) == 1.0);
  CHECK(cutoff_eta(0.3) == doctest::Approx(kEta03).epsilon(1e-14));
  CHECK(cutoff_eta(0.375) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cutoff_eta(0.5) == 0.0);
  CHECK(cutoff_eta(0.7) == 0.0);
  double prev = 1.0;
  for (int k = 0; k <= 1000; ++k) {
    const double v = cutoff_eta(0.25 + k * 0.00025);
    CHECK(v <= prev);
    CHECK(v >= 0.0);
    prev = v;
  }
}

TEST_CASE("kernel examples") {
  const KernelSpec k{{0.5, 0.5, 0}, 0.02, 2};
  CHECK(kernel_eval(k, {0.5, 0.5, 0}, 0.01) == doctest::Approx(1.0 / std::sqrt(4 * kPi * 0.01)).epsilon(1e-15));
  CHECK(kernel_eval(k, {0.0, 0.5, 0}, 0.01) == 0.0);
  CHECK(kernel_eval(k, {0.7, 0.5, 0}, 0.01) == doctest::Approx(kKernel02).epsilon(1e-14));
  CHECK(kernel_eval(k, {0.5, 0.3, 0}, 0.01) == doctest::Approx(kKernel02).epsilon(1e-14));
  // minimal image across the seam
  const KernelSpec edge{{0.05, 0.5, 0}, 0.02, 2};
  CHECK(kernel_eval(edge, {0.85, 0.5, 0}, 0.01) == doctest::Approx(kKernel02).epsilon(1e-12));
  const KernelSpec k3{{0.5, 0.5, 0.5}, 0.02, 3};
  CHECK(kernel_eval(k3, {0.5, 0.5, 0.5}, 0.01) == doctest::Approx(1.0 / (4 * kPi * 0.01)).epsilon(1e-15));
  CHECK_THROWS_AS(kernel_eval(k, {0.5, 0.5, 0}, 0.02), Error);
  CHECK_THROWS_AS(kernel_eval(k, {0.5, 0.5, 0}, 0.03), Error);
}

TEST_CASE("zero measure gives zero functional") {
  const PeriodicGrid g(2, 64);
  const MeasureField m = energy_and_discrepancy({ScalarField(g, 1.0), 4 * g.h()}, quartic_profile().well());
  CHECK(monotonicity_functional(m, {{0.5, 0.5, 0}, 0.01, 2}, 0.0) == 0.0);
}

TEST_CASE("a line through the pole carries mass sigma") {
  const PeriodicGrid g(2, 256);
  const MeasureField m = sheet_measure(g, 4 * g.h());
  const double sigma = quartic_profile().sigma();
  for (double tau : {1e-3, 7e-4, 5e-4, 4e-4}) {
    const double v = monotonicity_functional(m, {{0.25, 0.5, 0}, tau, 2}, 0.0) / sigma;
    CHECK(v >= 0.97);
    CHECK(v <= 1.005);
  }
}

TEST_CASE("line mass deficit scales like eps^2 / tau") {
  // the diffuse profile spreads the line over a normal width ~ eps, which the
  // kernel sees as a deficit of (normal variance) / (4 tau)
  const PeriodicGrid g(2, 256);
  const double eps = 4 * g.h();
  const MeasureField m = sheet_measure(g, eps);
  const double sigma = quartic_profile().sigma();
  std::vector<double> c;
  for (double tau : {2e-3, 1e-3, 5e-4}) {
    const double v = monotonicity_functional(m, {{0.25, 0.5, 0}, tau, 2}, 0.0) / sigma;
    c.push_back((1.0 - v) * tau / (eps * eps));
  }
  for (double x : c) CHECK(x == doctest::Approx(c.front()).epsilon(0.25));
}

TEST_CASE("pole offset from the line decays like a Gaussian") {
  const PeriodicGrid g(2, 256);
  const MeasureField m = sheet_measure(g, 4 * g.h());
  const double tau = 1e-3;
  const double base = monotonicity_functional(m, {{0.25, 0.5, 0}, tau, 2}, 0.0);
  for (double delta : {0.02, 0.04, 0.06}) {
    const double v = monotonicity_functional(m, {{0.25 + delta, 0.5, 0}, tau, 2}, 0.0);
    CHECK(v / base == doctest::Approx(std::exp(-delta * delta / (4 * tau))).epsilon(0.03));
  }
}

TEST_CASE("functional is invariant under joint torus translations") {
  const PeriodicGrid g(2, 128);
  const double eps = 4 * g.h();
  const int shift = 37;
  const MeasureField a = sheet_measure(g, eps, 0.25);
  const MeasureField b = sheet_measure(g, eps, 0.25 + shift * g.h());
  const double va = monotonicity_functional(a, {{0.25, 0.3, 0}, 2e-3, 2}, 0.0);
  const double vb = monotonicity_functional(b, {{0.25 + shift * g.h(), 0.3 + 11 * g.h(), 0}, 2e-3, 2}, 0.0);
  CHECK(vb == doctest::Approx(va).epsilon(1e-12));
}

TEST_CASE("samples carry discrepancy and transport integrals") {
  const PeriodicGrid g(2, 128);
  const MeasureField m = sheet_measure(g, 4 * g.h());
  const KernelSpec k{{0.25, 0.5, 0}, 0.01, 2};
  const VectorField u(g, 0.5);  // |u|^2 = 0.5
  const MonotonicitySample s = sample_monotonicity(m, k, 0.0, &u, 3.0);
  CHECK(s.value == doctest::Approx(monotonicity_functional(m, k, 0.0)).epsilon(1e-13));
  CHECK(s.transport == doctest::Approx(0.25 * s.value).epsilon(1e-13));
  CHECK(s.discrepancy >= 0.0);
  CHECK(s.density == 3.0);
  CHECK(sample_monotonicity(m, k, 0.0).transport == 0.0);
}

TEST_CASE("audit arithmetic") {
  const KernelSpec k{{0.5, 0.5, 0}, 0.1, 2};
  std::vector<MonotonicitySample> s;
  for (int j = 0; j <= 4; ++j) {
    MonotonicitySample m;
    m.t = 0.01 * j;
    m.value = 1.0 + 0.1 * j;
    m.discrepancy = 2.0;
    m.transport = 10.0 * j;
    m.density = 1.0 + j;
    s.push_back(m);
  }
  const AuditRecord a = monotonicity_audit(s, k, 0.0, 0.04, 1e-3, 2.0);
  CHECK(a.samples.size() == 5);
  CHECK(a.delta_m == doctest::Approx(0.4));
  CHECK(a.discrepancy_term == doctest::Approx(0.08));
  CHECK(a.transport_term == doctest::Approx(0.5 * 0.04 * 40.0));
  CHECK(a.tail_term == doctest::Approx(2.0 * std::exp(-1.0 / 12.8) * 0.04 * 5.0));
  CHECK(a.pass == (0.4 <= a.transport_term + a.tail_term + 1e-3));

  // only four samples fall inside [0.01, 0.04]
  CHECK(monotonicity_audit(s, k, 0.01, 0.04).samples.size() == 4);
  try {
    monotonicity_audit(s, k, 0.015, 0.04);
    FAIL("expected InsufficientSnapshots");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientSnapshots);
  }
  CHECK_THROWS_AS(monotonicity_audit(s, k, 0.0, 0.2), Error);
}

TEST_CASE("stationary state audits to zero") {
  const PeriodicGrid g(2, 64);
  const MeasureField m = energy_and_discrepancy({ScalarField(g, 1.0), 4 * g.h()}, quartic_profile().well());
  const KernelSpec k{{0.5, 0.5, 0}, 0.05, 2};
  const VectorField u(g, 1.0);
  std::vector<MonotonicitySample> s;
  for (int j = 0; j < 5; ++j) s.push_back(sample_monotonicity(m, k, 0.005 * j, &u));
  const AuditRecord a = monotonicity_audit(s, k, 0.0, 0.02, 0.0, 0.0);
  CHECK(a.delta_m == 0.0);
  CHECK(a.discrepancy_term == 0.0);
  CHECK(a.transport_term == 0.0);
  CHECK(a.tail_term == 0.0);
  CHECK(a.pass);
}

TEST_SUITE("expected_red") {
  // below s - t ~ 1.6 eps^2 the diffuse width pushes the mass under 0.97 sigma
  TEST_CASE("line mass stays in the band at s - t = 2.5e-4") {
    const PeriodicGrid g(2, 256);
    const MeasureField m = sheet_measure(g, 4 * g.h());
    const double v = monotonicity_functional(m, {{0.25, 0.5, 0}, 2.5e-4, 2}, 0.0) / quartic_profile().sigma();
    MESSAGE("mass / sigma = " << v);
    CHECK(v >= 0.97);
    CHECK(v <= 1.005);
  }
}
