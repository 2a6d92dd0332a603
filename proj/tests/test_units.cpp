// Tests for the physical-to-dimensionless parameter scaling layer.
// Oracles here are recomputed independently from first principles
// (recoil energy, impulse integrals) rather than read back from the
// implementation's own formulas wherever possible.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <rotor/constants.hpp>
#include <rotor/rng.hpp>
#include <rotor/units.hpp>
#include <rotor/util.hpp>

#include <cmath>
#include <cstring>
#include <stdexcept>

using namespace rotor;
namespace kc = rotor::constants;

namespace {

// Reference cesium / 852 nm configuration used throughout.
PhysicalParams reference_params(double K_target = 5.3) {
  PhysicalParams p;
  p.atom_mass = kc::cesium_mass;
  p.wavelength = 852e-9;
  p.pulse_width = 1.42e-6;
  p.kick_period = 9.47e-6;
  p.potential_depth = potential_depth_for(p, K_target);
  return p;
}

}  // namespace

TEST_CASE("recoil frequency for cesium at 852 nm") {
  // Independent oracle: hbar * k_laser^2 / (2 M) with k_laser = 2 pi / lambda.
  const double k_laser = two_pi / 852e-9;
  const double oracle = kc::hbar * k_laser * k_laser / (2.0 * kc::cesium_mass);
  const double w = recoil_frequency(kc::cesium_mass, 852e-9);
  CHECK(w == doctest::Approx(oracle).epsilon(1e-13));
  // Known magnitude: about 2 pi x 2.07 kHz.
  CHECK(w / two_pi == doctest::Approx(2.068e3).epsilon(0.005));
}

TEST_CASE("recoil frequency scales as 1/M and 1/lambda^2") {
  const double w0 = recoil_frequency(kc::cesium_mass, 852e-9);
  CHECK(recoil_frequency(2.0 * kc::cesium_mass, 852e-9) ==
        doctest::Approx(0.5 * w0).epsilon(1e-14));
  CHECK(recoil_frequency(kc::cesium_mass, 2.0 * 852e-9) ==
        doctest::Approx(0.25 * w0).epsilon(1e-14));
}

TEST_CASE("reference configuration lands on the expected dimensionless values") {
  PhysicalParams p = reference_params(5.3);
  const ScaledParams s = scale_params(p);

  CHECK(s.duty == doctest::Approx(0.14994720168954592).epsilon(1e-12));
  CHECK(std::abs(s.duty - 0.150) < 0.001);
  CHECK(std::abs(s.hbar_eff - 0.98) < 0.01);
  CHECK(s.stochasticity == doctest::Approx(5.3).epsilon(1e-12));
  // Boundary momentum agrees with 2 pi / duty.
  CHECK(std::abs(s.boundary_momentum - two_pi / s.duty) <=
        1e-10 * std::abs(s.boundary_momentum));

  // Lattice frame offset for a 1 MHz detuning.
  p.frequency_offset = 1.0e6;
  const double rl = lattice_momentum(p, s.hbar_eff);
  CHECK(std::abs(rl - 119.0) < 0.5);
  CHECK(rl == doctest::Approx(119.00352971798137).epsilon(1e-12));
}

TEST_CASE("hbar_eff is 8 omega_r T and scales linearly with the period") {
  PhysicalParams p = reference_params();
  const double w = recoil_frequency(p.atom_mass, p.wavelength);
  const ScaledParams s = scale_params(p);
  CHECK(s.hbar_eff == doctest::Approx(8.0 * w * p.kick_period).epsilon(1e-13));

  PhysicalParams p2 = p;
  p2.kick_period *= 2.0;  // duty halves, hbar_eff doubles
  const ScaledParams s2 = scale_params(p2);
  CHECK(s2.hbar_eff == doctest::Approx(2.0 * s.hbar_eff).epsilon(1e-13));
  CHECK(s2.duty == doctest::Approx(0.5 * s.duty).epsilon(1e-13));
}

TEST_CASE("zero potential depth gives zero kick strength") {
  PhysicalParams p = reference_params();
  p.potential_depth = 0.0;
  const ScaledParams s = scale_params(p);
  CHECK(s.kick_amplitude == 0.0);
  CHECK(s.stochasticity == 0.0);
}

TEST_CASE("kick strength grows monotonically with depth and pulse width") {
  PhysicalParams p = reference_params();
  const double K1 = scale_params(p).stochasticity;
  p.potential_depth *= 1.5;
  const double K2 = scale_params(p).stochasticity;
  p.potential_depth *= 1.5;
  const double K3 = scale_params(p).stochasticity;
  CHECK(K1 < K2);
  CHECK(K2 < K3);

  PhysicalParams q = reference_params();
  q.pulse_width = 1.0e-6;
  const double Ka = scale_params(q).stochasticity;
  q.pulse_width = 2.0e-6;
  const double Kb = scale_params(q).stochasticity;
  CHECK(Ka < Kb);
}

TEST_CASE("boundary momentum identity holds across random valid parameters") {
  Rng r(2026);
  for (int trial = 0; trial < 1000; ++trial) {
    PhysicalParams p;
    p.atom_mass = (50.0 + 200.0 * r.next_unit()) * kc::atomic_mass_unit;
    p.wavelength = (400e-9) + (1200e-9) * r.next_unit();
    p.kick_period = 1e-6 + 99e-6 * r.next_unit();
    p.pulse_width = p.kick_period * (0.01 + 0.89 * r.next_unit());
    p.potential_depth = 1e-30 + 1e-27 * r.next_unit();
    const ScaledParams s = scale_params(p);
    const double expected = two_pi / s.duty;
    CHECK(std::abs(s.boundary_momentum - expected) <=
          1e-10 * std::abs(expected));
  }
}

TEST_CASE("lattice momentum equals 4 pi T df in scaled units") {
  Rng r(77);
  for (int trial = 0; trial < 200; ++trial) {
    PhysicalParams p = reference_params();
    p.kick_period = 1e-6 + 50e-6 * r.next_unit();
    p.pulse_width = p.kick_period * 0.15;
    p.frequency_offset = -2e6 + 4e6 * r.next_unit();
    const ScaledParams s = scale_params(p);
    const double expected = 4.0 * pi * p.kick_period * p.frequency_offset;
    CHECK(std::abs(s.lattice_momentum - expected) <=
          1e-10 * std::max(1e-30, std::abs(expected)));
  }
}

TEST_CASE("lattice momentum is antisymmetric in the detuning and zero at zero") {
  PhysicalParams p = reference_params();
  const double h = scale_params(p).hbar_eff;
  p.frequency_offset = 0.0;
  CHECK(lattice_momentum(p, h) == 0.0);
  p.frequency_offset = 0.7e6;
  const double plus = lattice_momentum(p, h);
  p.frequency_offset = -0.7e6;
  const double minus = lattice_momentum(p, h);
  CHECK(plus == doctest::Approx(-minus).epsilon(1e-14));
  CHECK(plus > 0.0);
}

TEST_CASE("potential_depth_for round-trips through scale_params") {
  for (double K : {0.5, 5.3, 10.0, 42.0}) {
    PhysicalParams p = reference_params(K);
    CHECK(scale_params(p).stochasticity == doctest::Approx(K).epsilon(1e-12));
  }
}

TEST_CASE("scale_params is a pure function") {
  PhysicalParams p = reference_params();
  p.frequency_offset = 0.3e6;
  const ScaledParams a = scale_params(p);
  const ScaledParams b = scale_params(p);
  CHECK(std::memcmp(&a, &b, sizeof a) == 0);
}

TEST_CASE("validation rejects malformed physical parameters") {
  PhysicalParams p = reference_params();
  p.atom_mass = 0.0;
  CHECK_THROWS_AS(validate(p), std::domain_error);

  p = reference_params();
  p.wavelength = -1e-9;
  CHECK_THROWS_AS(validate(p), std::domain_error);

  p = reference_params();
  p.pulse_width = 0.0;
  CHECK_THROWS_AS(validate(p), std::domain_error);

  p = reference_params();
  p.pulse_width = p.kick_period;  // duty must be < 1
  CHECK_THROWS_AS(validate(p), std::domain_error);

  p = reference_params();
  p.potential_depth = -1e-30;
  CHECK_THROWS_AS(validate(p), std::domain_error);

  p = reference_params();
  p.kick_period = std::nan("");
  CHECK_THROWS_AS(validate(p), std::domain_error);

  // Zero pulse width has no finite boundary momentum.
  p = reference_params();
  p.pulse_width = 0.0;
  CHECK_THROWS_AS(boundary_momentum(p, 1.0), std::domain_error);
}
