#include <doctest.h>

#include <cmath>

#include "mct/errors.hpp"
#include "mct/potential.hpp"

using namespace mct;

namespace {
// frozen reference values (mpmath, 30 digits)
constexpr double kTanhSqrt2 = 0.888385561585660544953;
constexpr double kSigmaQuartic = 1.88561808316412673174;
// RK4 (step 1e-4) of psi' = sqrt(2 W(psi)), psi(0) = 0, at x = 1
constexpr double kRk4PsiAt1 = 0.8883855615856611;
}  // namespace

TEST_CASE("quartic well values") {
  const DoubleWell w = make_quartic_well();
  CHECK(w.value(1.0) == 0.0);
  CHECK(w.value(-1.0) == 0.0);
  CHECK(w.d1(1.0) == 0.0);
  CHECK(w.d1(-1.0) == 0.0);
  CHECK(w.value(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w.d2(0.9) == doctest::Approx(5.72).epsilon(1e-12));
}

TEST_CASE("well sign structure and convexity near the wells") {
  for (const DoubleWell& w : {make_quartic_well(), make_perturbed_quartic_well()}) {
    for (int k = 1; k < 2000; ++k) {
      const double s = -1.0 + 2.0 * k / 2000.0;
      if (s > w.gamma() + 1e-9) CHECK(w.d1(s) < 0.0);
      if (s < w.gamma() - 1e-9) CHECK(w.d1(s) > 0.0);
      if (std::abs(s) >= w.alpha()) CHECK(w.d2(s) >= w.kappa() - 1e-12);
    }
    CHECK(w.alpha() < 1.0);
    CHECK(w.kappa() > 0.0);
  }
}

TEST_CASE("standing wave of the quartic well") {
  const Profile p = standing_wave(make_quartic_well());
  CHECK(p.psi(0.0) == 0.0);
  CHECK(p.psi(1.0) == doctest::Approx(kTanhSqrt2).epsilon(1e-12));
  CHECK(p.psi(1.0) == doctest::Approx(kRk4PsiAt1).epsilon(1e-12));
  for (double x : {0.1, 0.7, 1.3, 2.9, 6.0}) CHECK(p.psi(-x) == doctest::Approx(-p.psi(x)).epsilon(1e-14));
  double prev = -1.0;
  for (int k = -200; k <= 200; ++k) {
    const double v = p.psi(0.05 * k);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(p.psi(30.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.psi(-30.0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(p.equipartition_residual(10.0, 1e-3) <= 1e-10);
}

TEST_CASE("standing wave of a generic well satisfies equipartition") {
  const Profile p = standing_wave(make_perturbed_quartic_well());
  CHECK(p.psi(0.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(p.equipartition_residual(10.0, 1e-3) <= 1e-10);
  for (double x : {0.5, 2.0, 5.0}) CHECK(p.psi_inverse(p.psi(x)) == doctest::Approx(x).epsilon(1e-6));
}

TEST_CASE("surface tension") {
  const DoubleWell q = make_quartic_well();
  CHECK(surface_tension(q) == doctest::Approx(kSigmaQuartic).epsilon(1e-12));
  // same well through the generic (quadrature) path
  const DoubleWell generic("quartic-generic", [](double s) { return (1 - s * s) * (1 - s * s); },
                           [](double s) { return 4 * s * (s * s - 1); }, [](double s) { return 12 * s * s - 4; });
  CHECK(generic.quartic_scale() == 0.0);
  CHECK(std::abs(surface_tension(generic) - kSigmaQuartic) <= 1e-9);
  for (double c : {0.25, 2.0, 9.0})
    CHECK(surface_tension(q.scaled(c)) == doctest::Approx(std::sqrt(c) * kSigmaQuartic).epsilon(1e-10));
}

TEST_CASE("degenerate well is rejected") {
  auto flat = [](double s) { return std::abs(s) < 0.5 ? 0.0 : (s * s - 0.25) * (1 - s * s) * 4; };
  auto d1 = [](double s) { return std::abs(s) < 0.5 ? 0.0 : 4 * (2 * s * (1 - s * s) - 2 * s * (s * s - 0.25)); };
  auto d2 = [](double s) { return std::abs(s) < 0.5 ? 0.0 : 4 * (2 - 12 * s * s + 0.5 + 0.0 * s); };
  CHECK_THROWS_AS(DoubleWell("flat", flat, d1, d2), Error);
  try {
    DoubleWell("flat", flat, d1, d2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidWell);
  }
}

TEST_CASE("bv map") {
  const auto Phi = bv_map(make_quartic_well());
  CHECK(Phi(-1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(Phi(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(Phi(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  double prev = -1.0;
  for (int k = 0; k <= 100; ++k) {
    const double v = Phi(-1.0 + 0.02 * k);
    CHECK(v >= prev);
    prev = v;
  }
  const Profile p = standing_wave(make_quartic_well());
  CHECK(std::abs(Phi(p.psi(10.0)) - Phi(p.psi(-10.0)) - 1.0) <= 1e-8);
}

TEST_CASE("well lookup by name") {
  CHECK(well_by_name("quartic").quartic_scale() > 0.0);
  CHECK_THROWS_AS(well_by_name("no-such-well"), Error);
}
