#pragma once

#include <cmath>
#include <cstddef>

#include "hhg/constants.hpp"
#include "hhg/error.hpp"
#include "hhg/molecule.hpp"

namespace hhg {

/// How the vector potential of the switched-on sine field is anchored.
/// Both give the same E(t); they differ by a constant in A, which cancels in
/// every physical quantity of the saddle-point dipole.
enum class VectorPotentialConvention {
    turn_on_zero,  // A(t0) = 0:  A = (E0/w)(cos w s - 1)
    pure_cosine,   // A = (E0/w) cos w s, held at E0/w before turn-on
};

/// Semi-infinite monochromatic field E(t) = E0 sin(w (t - t0)) axis, t >= t0.
struct LaserField {
    double amplitude = 0.0;  // E0, a.u.
    double omega = 0.057;    // a.u.
    Vec3 axis = Vec3::UnitX();
    double turn_on_time = 0.0;
    VectorPotentialConvention convention = VectorPotentialConvention::turn_on_zero;

    LaserField() = default;
    LaserField(double e0, double w, Vec3 polarization, double t0 = 0.0,
               VectorPotentialConvention conv = VectorPotentialConvention::turn_on_zero)
        : amplitude(e0), omega(w), axis(std::move(polarization)), turn_on_time(t0), convention(conv) {
        validate();
    }

    static LaserField from_lab_units(double intensity_w_cm2, double wavelength_nm, Vec3 polarization) {
        return LaserField(units::field_from_intensity(intensity_w_cm2),
                          units::omega_from_wavelength(wavelength_nm), std::move(polarization));
    }

    void validate() const {
        if (!(omega > 0.0) || !std::isfinite(omega)) throw ConfigError("carrier frequency must be positive");
        if (!std::isfinite(amplitude)) throw ConfigError("field amplitude must be finite");
        if (!axis.allFinite() || std::abs(axis.norm() - 1.0) > 1e-12)
            throw ConfigError("polarization axis must be a unit vector");
    }

    double period() const { return units::period(omega); }
    double potential_amplitude() const { return amplitude / omega; }
};

inline Vec3 electric_field(const LaserField& f, double t) {
    const double s = t - f.turn_on_time;
    if (s < 0.0) return Vec3::Zero();
    return f.amplitude * std::sin(f.omega * s) * f.axis;
}

namespace detail {

inline double potential_scalar(const LaserField& f, double t) {
    const double s = t - f.turn_on_time;
    const double a0 = f.potential_amplitude();
    if (f.convention == VectorPotentialConvention::turn_on_zero)
        return s < 0.0 ? 0.0 : a0 * (std::cos(f.omega * s) - 1.0);
    return s < 0.0 ? a0 : a0 * std::cos(f.omega * s);
}

// Integrals over [s1, s2] with 0 <= s1 <= s2, written with trig difference
// identities so short intervals late in the pulse keep their precision.
inline double int_cos(double w, double s1, double s2) {  // int cos(w s) ds
    return 2.0 * std::cos(0.5 * w * (s1 + s2)) * std::sin(0.5 * w * (s2 - s1)) / w;
}

inline double int_cos2w(double w, double s1, double s2) {  // int cos(2 w s) ds
    return std::cos(w * (s1 + s2)) * std::sin(w * (s2 - s1)) / w;
}

inline double potential_integral_on(const LaserField& f, double s1, double s2) {
    const double a0 = f.potential_amplitude();
    const double c = int_cos(f.omega, s1, s2);
    return f.convention == VectorPotentialConvention::turn_on_zero ? a0 * (c - (s2 - s1)) : a0 * c;
}

inline double potential2_integral_on(const LaserField& f, double s1, double s2) {
    const double a0 = f.potential_amplitude();
    const double len = s2 - s1;
    const double cos2 = 0.5 * len + 0.5 * int_cos2w(f.omega, s1, s2);
    if (f.convention == VectorPotentialConvention::turn_on_zero)
        return a0 * a0 * (cos2 - 2.0 * int_cos(f.omega, s1, s2) + len);
    return a0 * a0 * cos2;
}

/// int_{t1}^{t2} a(t) dt of the scalar potential; a constant before turn-on.
inline double potential_integral(const LaserField& f, double t1, double t2) {
    double s1 = t1 - f.turn_on_time;
    double s2 = t2 - f.turn_on_time;
    double sum = 0.0;
    if (s1 < 0.0) {
        const double end = std::min(s2, 0.0);
        sum += potential_scalar(f, f.turn_on_time - 1.0) * (end - s1);
        s1 = 0.0;
    }
    if (s2 > s1) sum += potential_integral_on(f, s1, s2);
    return sum;
}

inline double potential2_integral(const LaserField& f, double t1, double t2) {
    double s1 = t1 - f.turn_on_time;
    double s2 = t2 - f.turn_on_time;
    double sum = 0.0;
    if (s1 < 0.0) {
        const double end = std::min(s2, 0.0);
        const double a = potential_scalar(f, f.turn_on_time - 1.0);
        sum += a * a * (end - s1);
        s1 = 0.0;
    }
    if (s2 > s1) sum += potential2_integral_on(f, s1, s2);
    return sum;
}

}  // namespace detail

/// A(t), with E = -dA/dt.
inline Vec3 vector_potential(const LaserField& f, double t) {
    return detail::potential_scalar(f, t) * f.axis;
}

/// int_{t1}^{t2} A(s) ds, closed form. Requires t1 <= t2.
inline Vec3 integral_A(const LaserField& f, double t1, double t2) {
    if (t2 < t1) throw ConfigError("integral_A: t1 must not exceed t2");
    return detail::potential_integral(f, t1, t2) * f.axis;
}

/// int_{t1}^{t2} A(s).A(s) ds, closed form. Requires t1 <= t2.
inline double integral_A2(const LaserField& f, double t1, double t2) {
    if (t2 < t1) throw ConfigError("integral_A2: t1 must not exceed t2");
    return detail::potential2_integral(f, t1, t2);
}

struct FieldDiagnostics {
    double ponderomotive_energy = 0.0;  // Up, hartree
    double quiver_radius = 0.0;         // alpha0, bohr
    double q_parameter = 0.0;           // R_max / (2 alpha0)
    double cutoff_energy = 0.0;         // Ip + 3.17 Up, hartree
    double cutoff_order = 0.0;          // cutoff_energy / omega
};

inline FieldDiagnostics diagnostics(const LaserField& f, double ionization_potential, double r_max) {
    FieldDiagnostics d;
    const double e = std::abs(units::electron_charge);
    d.ponderomotive_energy = e * e * f.amplitude * f.amplitude / (4.0 * f.omega * f.omega);
    d.quiver_radius = e * f.amplitude / (f.omega * f.omega);
    d.q_parameter = d.quiver_radius > 0.0 ? r_max / (2.0 * d.quiver_radius) : 0.0;
    d.cutoff_energy = ionization_potential + 3.17 * d.ponderomotive_energy;
    d.cutoff_order = d.cutoff_energy / f.omega;
    return d;
}

inline FieldDiagnostics diagnostics(const LaserField& f, const Molecule& molecule, std::size_t orbital_index) {
    return diagnostics(f, molecule.orbital(orbital_index).ionization_potential,
                       max_internuclear_distance(molecule));
}

}  // namespace hhg
