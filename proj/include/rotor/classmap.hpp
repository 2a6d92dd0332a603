#pragma once

#include <cmath>
#include <vector>

#include "rotor/pulses.hpp"
#include "rotor/util.hpp"

namespace rotor {

// One rotor: phi kept in [0, 2pi), rho unbounded and never wrapped.
struct PhaseState {
  double phi;
  double rho;
};

// states[n] is the state after n kicks; states[0] the initial condition.
using Trajectory = std::vector<PhaseState>;

// One kick: phi' = (phi + rho) mod 2pi, rho' = rho + A(rho) sin(phi' + psi(rho)),
// with the signed amplitude A and phase psi evaluated at the PRE-kick momentum.
inline PhaseState step(PhaseState s, const KickProfile& profile) {
  const double phi = wrap_2pi(s.phi + s.rho);
  double a, psi;
  profile.kick_terms(s.rho, &a, &psi);
  return {phi, s.rho + a * std::sin(phi + psi)};
}

Trajectory iterate(PhaseState s0, const KickProfile& profile, int n_kicks);

// O(1)-memory variant of iterate for ensemble use.
PhaseState iterate_final(PhaseState s0, const KickProfile& profile, int n_kicks);

struct SectionPoint {
  int trajectory_id;
  int kick;
  double phi;
  double rho;
};

// All trajectory points of all initial conditions (kick 0 included), ordered
// trajectory-major then kick-minor; independent initials may run in parallel
// but the output order is fixed.
std::vector<SectionPoint> poincare_section(const std::vector<PhaseState>& initials,
                                           const KickProfile& profile, int n_kicks);

}  // namespace rotor
