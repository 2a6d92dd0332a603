#pragma once

namespace rotor::constants {

// CODATA 2018.
inline constexpr double hbar = 1.054571817e-34;               // J s
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

// 133Cs (AME2020 atomic mass).
inline constexpr double cesium_mass_u = 132.905451961;
inline constexpr double cesium_mass = cesium_mass_u * atomic_mass_unit;  // kg

// Default kicking-lattice wavelength (Cs D2 line, rounded).
inline constexpr double default_wavelength = 852e-9;  // m

}  // namespace rotor::constants
