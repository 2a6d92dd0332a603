#include "rotor/units.hpp"

#include <cmath>
#include <stdexcept>

#include "rotor/util.hpp"

namespace rotor {

void validate(const PhysicalParams& p) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(p.atom_mass) || !finite(p.wavelength) || !finite(p.potential_depth) ||
      !finite(p.pulse_width) || !finite(p.kick_period) || !finite(p.frequency_offset))
    throw std::domain_error("PhysicalParams: non-finite field");
  if (p.atom_mass <= 0.0) throw std::domain_error("PhysicalParams: atom_mass must be > 0");
  if (p.wavelength <= 0.0) throw std::domain_error("PhysicalParams: wavelength must be > 0");
  if (p.kick_period <= 0.0) throw std::domain_error("PhysicalParams: kick_period must be > 0");
  if (!(p.pulse_width > 0.0 && p.pulse_width < p.kick_period))
    throw std::domain_error("PhysicalParams: requires 0 < pulse_width < kick_period");
  if (p.potential_depth < 0.0)
    throw std::domain_error("PhysicalParams: potential_depth must be >= 0");
}

double recoil_frequency(double mass, double wavelength) {
  if (!(mass > 0.0)) throw std::domain_error("recoil_frequency: mass must be > 0");
  if (!(wavelength > 0.0)) throw std::domain_error("recoil_frequency: wavelength must be > 0");
  return 2.0 * pi * pi * constants::hbar / (mass * wavelength * wavelength);
}

double boundary_momentum(const PhysicalParams& p, double hbar_eff) {
  if (!(p.pulse_width > 0.0))
    throw std::domain_error("boundary_momentum: pulse_width must be > 0 (zero-width kicks have no boundary)");
  return p.atom_mass * p.wavelength * p.wavelength * hbar_eff /
         (8.0 * pi * constants::hbar * p.pulse_width);
}

double lattice_momentum(const PhysicalParams& p, double hbar_eff) {
  return p.atom_mass * p.wavelength * p.wavelength * p.frequency_offset * hbar_eff /
         (4.0 * pi * constants::hbar);
}

ScaledParams scale_params(const PhysicalParams& p) {
  validate(p);
  ScaledParams s;
  s.recoil_frequency = recoil_frequency(p.atom_mass, p.wavelength);
  s.hbar_eff = 8.0 * s.recoil_frequency * p.kick_period;
  s.kick_amplitude = (8.0 * p.potential_depth / constants::hbar) * s.recoil_frequency *
                     p.kick_period * p.kick_period;
  s.duty = p.pulse_width / p.kick_period;
  s.stochasticity = s.duty * s.kick_amplitude;
  s.boundary_momentum = boundary_momentum(p, s.hbar_eff);
  s.lattice_momentum = lattice_momentum(p, s.hbar_eff);
  return s;
}

double potential_depth_for(const PhysicalParams& p, double K) {
  validate(p);
  const double w = recoil_frequency(p.atom_mass, p.wavelength);
  // K = (t_p/T) * (8 V0/hbar) w T^2  =>  V0 = K hbar / (8 w T t_p)
  return K * constants::hbar / (8.0 * w * p.kick_period * p.pulse_width);
}

}  // namespace rotor
