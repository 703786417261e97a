#pragma once

#include <cmath>
#include <numbers>

/// Physical constants and unit conversions. Everything inside the library is
/// in atomic units; conversions happen only at the edges (config, ingestion).
namespace hhg::units {

inline constexpr double pi = std::numbers::pi;

/// Electron charge in atomic units. Kept explicit wherever e*A appears.
inline constexpr double electron_charge = -1.0;

/// Intensity (W/cm^2) that corresponds to a field amplitude of 1 a.u.
inline constexpr double atomic_intensity_w_cm2 = 3.50945e16;

/// omega[a.u.] = photon_energy_nm_au / lambda[nm]   (2*pi*c in a.u. * nm)
inline constexpr double omega_nm_product = 45.5633;

inline constexpr double bohr_per_angstrom = 1.0 / 0.52917721067;
inline constexpr double debye_per_au = 2.541746473;

inline double field_from_intensity(double intensity_w_cm2) {
    return std::sqrt(intensity_w_cm2 / atomic_intensity_w_cm2);
}

inline double omega_from_wavelength(double wavelength_nm) {
    return omega_nm_product / wavelength_nm;
}

inline double period(double omega) { return 2.0 * pi / omega; }

}  // namespace hhg::units
