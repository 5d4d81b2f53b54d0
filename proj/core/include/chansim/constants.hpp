#pragma once

// Unit system: lengths in nm, energies in eV, angles in rad (mrad at I/O
// boundaries), time in s. The Coulomb coupling e^2 carries the Gaussian-units
// 1/(4 pi eps0) factor, so potentials come out directly in eV for r in nm.

namespace chansim::constants {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double bohr_radius_nm = 0.0529177;
inline constexpr double e2_eV_nm = 1.43996;            // e^2/(4 pi eps0)
inline constexpr double proton_mass_eV = 938.272089e6;   // m_p c^2
inline constexpr double electron_mass_eV = 0.51099895e6; // m_e c^2
inline constexpr double c_nm_per_s = 2.99792458e17;
inline constexpr double hbar_eV_s = 6.582119569e-16;

// proton speed (nm/s) from kinetic energy (eV), non-relativistic
inline double proton_speed(double e_eV) noexcept;

}  // namespace chansim::constants

#include <cmath>

namespace chansim::constants {

inline double proton_speed(double e_eV) noexcept {
    return c_nm_per_s * std::sqrt(2.0 * e_eV / proton_mass_eV);
}

}  // namespace chansim::constants
