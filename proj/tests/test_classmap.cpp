// Tests for the single-trajectory map: exact known steps, boundary
// pinning, the free rotor limit, confinement, and section bookkeeping.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <rotor/classmap.hpp>
#include <rotor/pulses.hpp>
#include <rotor/util.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace rotor;

TEST_CASE("one step with unit kick from (pi/2, 0) lands exactly on (pi/2, 1)") {
  const KickProfile prof = KickProfile::constant(1.0);
  PhaseState s{pi / 2.0, 0.0};
  s = step(s, prof);
  CHECK(s.phi == pi / 2.0);  // wrap(pi/2 + 0) is exact
  CHECK(s.rho == 1.0);       // sin(pi/2) == 1 exactly
}

TEST_CASE("a kick at phi' = pi leaves the momentum essentially unchanged") {
  const KickProfile prof = KickProfile::constant(5.3);
  PhaseState s{0.0, pi};
  s = step(s, prof);
  CHECK(s.phi == pi);
  // sin(pi) in floating point is ~1.2e-16, so rho moves by at most K eps.
  CHECK(std::abs(s.rho - pi) <= 1e-14);
}

TEST_CASE("trajectories started exactly on the boundary momentum stay pinned") {
  const double rho_b = 13.5 * pi;
  const KickProfile prof = KickProfile::sinc(5.3, rho_b);
  for (double sign : {1.0, -1.0}) {
    PhaseState s{0.7, sign * rho_b};
    for (int n = 0; n < 1000; ++n) {
      s = step(s, prof);
      CHECK(s.rho == sign * rho_b);  // bitwise: profile is exactly zero there
    }
  }
}

TEST_CASE("iterate returns n+1 states beginning with the initial condition") {
  const KickProfile prof = KickProfile::constant(2.0);
  const PhaseState s0{1.0, 0.5};
  const Trajectory t0 = iterate(s0, prof, 0);
  REQUIRE(t0.size() == 1);
  CHECK(t0[0].phi == s0.phi);
  CHECK(t0[0].rho == s0.rho);

  const Trajectory t5 = iterate(s0, prof, 5);
  REQUIRE(t5.size() == 6);
  CHECK(t5[0].phi == s0.phi);
  // element i+1 is one step applied to element i
  for (int i = 0; i < 5; ++i) {
    const PhaseState next = step(t5[i], prof);
    CHECK(next.phi == t5[i + 1].phi);
    CHECK(next.rho == t5[i + 1].rho);
  }
  CHECK_THROWS_AS(iterate(s0, prof, -1), std::invalid_argument);
}

TEST_CASE("iterate_final equals the last element of iterate") {
  const KickProfile prof = KickProfile::sinc(5.3, 42.5);
  const PhaseState s0{2.3, 7.7};
  const Trajectory t = iterate(s0, prof, 200);
  const PhaseState last = iterate_final(s0, prof, 200);
  CHECK(last.phi == t.back().phi);
  CHECK(last.rho == t.back().rho);
}

TEST_CASE("zero kick strength reduces to the free rotor") {
  const KickProfile prof = KickProfile::constant(0.0);
  const double phi0 = 0.3, rho0 = 1.7;
  PhaseState s{phi0, rho0};
  for (int n = 1; n <= 100; ++n) {
    s = step(s, prof);
    CHECK(s.rho == rho0);  // momentum untouched bit for bit
    const double expected = wrap_2pi(phi0 + n * rho0);
    // accumulated rounding from repeated wrapping stays tiny
    CHECK(std::abs(std::remainder(s.phi - expected, two_pi)) <= 1e-10);
  }
}

TEST_CASE("weak kicks stay confined by invariant tori") {
  const KickProfile prof = KickProfile::constant(0.5);
  for (int i = 0; i < 20; ++i) {
    const double rho0 = two_pi * i / 20.0;
    PhaseState s{2.1, rho0};
    double worst = 0.0;
    for (int n = 0; n < 10000; ++n) {
      s = step(s, prof);
      worst = std::max(worst, std::abs(s.rho - rho0));
    }
    CHECK(worst < two_pi);
  }
}

TEST_CASE("chaotic trajectories respect the momentum boundary") {
  const double rho_b = 13.5 * pi;
  const KickProfile prof = KickProfile::sinc(5.3, rho_b);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      PhaseState s{two_pi * (i + 0.5) / 10.0,
                   -rho_b + 2.0 * rho_b * (j + 0.5) / 10.0};
      for (int n = 0; n < 120; ++n) {
        s = step(s, prof);
        worst = std::max(worst, std::abs(s.rho));
      }
    }
  }
  CHECK(worst <= rho_b + 2.0);
}

TEST_CASE("poincare_section records trajectory-major, kick-minor order") {
  const KickProfile prof = KickProfile::constant(1.5);
  std::vector<PhaseState> initials = {{0.1, 0.0}, {0.2, 1.0}, {0.3, -1.0}};
  const auto pts = poincare_section(initials, prof, 2);
  REQUIRE(pts.size() == 9);  // 3 trajectories x (2 kicks + initial)
  int idx = 0;
  for (int id = 0; id < 3; ++id) {
    Trajectory t = iterate(initials[id], prof, 2);
    for (int k = 0; k <= 2; ++k, ++idx) {
      CHECK(pts[idx].trajectory_id == id);
      CHECK(pts[idx].kick == k);
      CHECK(pts[idx].phi == t[k].phi);
      CHECK(pts[idx].rho == t[k].rho);
    }
  }
}

TEST_CASE("poincare_section with zero kicks returns just the initials") {
  const KickProfile prof = KickProfile::constant(1.0);
  std::vector<PhaseState> initials = {{0.4, 2.0}};
  const auto pts = poincare_section(initials, prof, 0);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].kick == 0);
  CHECK(pts[0].phi == 0.4);
  CHECK(pts[0].rho == 2.0);
}

TEST_CASE("poincare_section is reproducible and validates input") {
  const KickProfile prof = KickProfile::sinc(5.3, 42.5);
  std::vector<PhaseState> initials;
  for (int i = 0; i < 12; ++i) initials.push_back({0.5 + 0.01 * i, 3.0 + i});
  const auto a = poincare_section(initials, prof, 50);
  const auto b = poincare_section(initials, prof, 50);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].phi == b[i].phi);
    CHECK(a[i].rho == b[i].rho);
  }
  CHECK_THROWS_AS(poincare_section({}, prof, 10), std::invalid_argument);
  CHECK_THROWS_AS(poincare_section(initials, prof, -3), std::invalid_argument);
}
