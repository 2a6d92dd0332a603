#pragma once

#include "rotor/constants.hpp"

namespace rotor {

// Laboratory parameters of a pulsed optical-lattice kicking experiment.
struct PhysicalParams {
  double atom_mass = constants::cesium_mass;             // kg
  double wavelength = constants::default_wavelength;     // m
  double potential_depth = 0.0;                          // J, V0 >= 0
  double pulse_width = 1.42e-6;                          // s, t_p
  double kick_period = 9.47e-6;                          // s, T
  double frequency_offset = 0.0;                         // Hz, per-beam offset df
};

// Dimensionless kicked-rotor parameters. Scaled position phi = 2 k_L x,
// scaled momentum rho carries [phi, rho] = i * hbar_eff.
struct ScaledParams {
  double recoil_frequency;    // omega_R, rad/s (the one SI leftover)
  double hbar_eff;            // 8 omega_R T
  double kick_amplitude;      // k = (8 V0 / hbar) omega_R T^2
  double stochasticity;       // K = duty * k
  double duty;                // eta = t_p / T
  double boundary_momentum;   // rho_b
  double lattice_momentum;    // rho_L
};

// Throws std::domain_error when a PhysicalParams invariant is violated
// (non-positive mass/wavelength/period, pulse width outside (0, T),
// negative potential depth, or any non-finite field).
void validate(const PhysicalParams& p);

// omega_R = hbar k_L^2 / (2 M) = 2 pi^2 hbar / (M lambda^2).
// Throws std::domain_error on non-positive input.
double recoil_frequency(double mass, double wavelength);

// rho_b = M lambda^2 hbar_eff / (8 pi hbar t_p). Algebraically equal to
// 2 pi T / t_p = 2 pi / eta whenever hbar_eff = 8 omega_R T.
double boundary_momentum(const PhysicalParams& p, double hbar_eff);

// rho_L = M lambda^2 df hbar_eff / (4 pi hbar); equals 4 pi T df under the
// same identity. Mean scaled momentum of a lab-frame-stationary cloud as
// seen from the lattice moving at lambda*df.
double lattice_momentum(const PhysicalParams& p, double hbar_eff);

ScaledParams scale_params(const PhysicalParams& p);

// V0 that makes scale_params(p) report stochasticity K.
double potential_depth_for(const PhysicalParams& p, double K);

}  // namespace rotor
