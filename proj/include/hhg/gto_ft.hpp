#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hhg/constants.hpp"
#include "hhg/error.hpp"
#include "hhg/molecule.hpp"

/// Closed-form plane-wave integrals of Cartesian Gaussians.
///
/// The 1-D building block is
///     M_a(alpha, q) = int u^a exp(-alpha u^2) exp(i q u) du
///                   = sqrt(pi/alpha) (i s)^a H_a(q s) exp(-q^2 s^2),   s = 1/(2 sqrt(alpha))
/// with H_a the physicists' Hermite polynomial. Three of them multiply into
/// the 3-D overlap; the dipole operator r is handled with r e^{iP.r} = -i grad_P e^{iP.r},
/// which raises one Cartesian power by one and adds the centre offset.
namespace hhg {

using cdouble = std::complex<double>;

inline constexpr int max_cartesian_power = 6;

/// (2 pi)^{-3/2}, the plane-wave normalization used by every matrix element.
inline const double plane_wave_norm = std::pow(2.0 * units::pi, -1.5);

namespace detail {

inline cdouble ipow(int n) {
    switch (n & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

/// out[n] = s^n H_n(q s) for n = 0..count-1
inline void scaled_hermite(double q, double s, int count, double* out) {
    const double x = q * s;
    double hm1 = 0.0;
    double h = 1.0;
    double sn = 1.0;
    for (int n = 0; n < count; ++n) {
        out[n] = sn * h;
        const double next = 2.0 * x * h - 2.0 * n * hm1;
        hm1 = h;
        h = next;
        sn *= s;
    }
}

}  // namespace detail

/// int u^a exp(-alpha u^2) exp(i q u) du
inline cdouble gaussian_moment_1d(int a, double alpha, double q) {
    if (a < 0) throw ConfigError("Cartesian power must be non-negative");
    if (a > max_cartesian_power)
        throw CapabilityError("Cartesian power " + std::to_string(a) + " exceeds supported maximum " +
                              std::to_string(max_cartesian_power));
    if (!(alpha > 0.0)) throw ConfigError("Gaussian exponent must be positive");
    const double s = 0.5 / std::sqrt(alpha);
    std::array<double, max_cartesian_power + 1> h{};
    detail::scaled_hermite(q, s, a + 1, h.data());
    return std::sqrt(units::pi / alpha) * std::exp(-q * q * s * s) * h[a] * detail::ipow(a);
}

/// int phi(r - R) exp(i Pi.r) dr for one contracted shell (no plane-wave norm).
inline cdouble plane_wave_overlap(const ContractedShell& shell, const Vec3& center, const Vec3& Pi) {
    const auto& p = shell.powers();
    cdouble sum = 0.0;
    for (const auto& prim : shell.primitives()) {
        sum += prim.coefficient * gaussian_moment_1d(p.a, prim.exponent, Pi.x()) *
               gaussian_moment_1d(p.b, prim.exponent, Pi.y()) *
               gaussian_moment_1d(p.c, prim.exponent, Pi.z());
    }
    const double phase = Pi.dot(center);
    return shell.normalization() * std::polar(1.0, phase) * sum;
}

enum class ElementMode { full, per_center_stripped };

/// Per-orbital evaluation tables: primitives grouped by exponent for every
/// centre, weights C_l N_l eta_k folded in, zero-weight terms dropped.
/// Read-only after construction; safe to share between threads.
class RecombinationKernel {
  public:
    struct Term {
        int a, b, c;
        double weight;
    };
    struct Group {
        double alpha;
        double s;           // 1 / (2 sqrt(alpha))
        double prefactor;   // (pi/alpha)^{3/2} (2 pi)^{-3/2}
        int max_power;      // max over terms and dims, before the dipole raise
        std::vector<Term> terms;
    };
    struct Center {
        Vec3 position;
        std::vector<Group> groups;
    };

    RecombinationKernel(const Molecule& molecule, std::size_t orbital_index) {
        const auto& orb = molecule.orbital(orbital_index);
        std::size_t k = 0;
        for (const auto& atom : molecule.centers()) {
            Center c{atom.position, {}};
            for (const auto& shell : atom.shells) {
                const double coef = orb.coefficients[k++];
                if (coef == 0.0) continue;
                const auto& p = shell.powers();
                const int pmax = std::max({p.a, p.b, p.c});
                if (pmax + 1 > max_cartesian_power)
                    throw CapabilityError("shell power " + std::to_string(pmax) +
                                          " too large for the dipole kernel");
                for (const auto& prim : shell.primitives()) {
                    const double w = coef * shell.normalization() * prim.coefficient;
                    if (w == 0.0) continue;
                    Group* g = nullptr;
                    for (auto& existing : c.groups)
                        if (existing.alpha == prim.exponent) g = &existing;
                    if (g == nullptr) {
                        c.groups.push_back({prim.exponent, 0.5 / std::sqrt(prim.exponent),
                                            std::pow(units::pi / prim.exponent, 1.5) * plane_wave_norm,
                                            0, {}});
                        g = &c.groups.back();
                    }
                    g->max_power = std::max(g->max_power, pmax);
                    g->terms.push_back({p.a, p.b, p.c, w});
                }
            }
            centers_.push_back(std::move(c));
        }
    }

    std::size_t center_count() const { return centers_.size(); }
    const Vec3& center_position(std::size_t i) const { return centers_[i].position; }

    /// Single-centre recombination element with the exp(i Pi.R_i) phase removed:
    ///   (2pi)^{-3/2} int phi_i(u) (u + R_i) exp(i Pi.u) du
    /// If `overlap` is non-null it also receives (2pi)^{-3/2} int phi_i(u) exp(i Pi.u) du.
    CVec3 stripped(std::size_t center, const Vec3& Pi, cdouble* overlap = nullptr) const {
        const Center& c = centers_[center];
        cdouble ov = 0.0;
        cdouble dx = 0.0;
        cdouble dy = 0.0;
        cdouble dz = 0.0;
        const double pi2 = Pi.squaredNorm();
        std::array<double, max_cartesian_power + 1> hx{}, hy{}, hz{};
        for (const Group& g : c.groups) {
            const double gauss = g.prefactor * std::exp(-pi2 * g.s * g.s);
            const int n = g.max_power + 2;
            detail::scaled_hermite(Pi.x(), g.s, n, hx.data());
            detail::scaled_hermite(Pi.y(), g.s, n, hy.data());
            detail::scaled_hermite(Pi.z(), g.s, n, hz.data());
            cdouble gov = 0.0, gx = 0.0, gy = 0.0, gz = 0.0;
            for (const Term& t : g.terms) {
                const cdouble phase = detail::ipow(t.a + t.b + t.c);
                const double base = hx[t.a] * hy[t.b] * hz[t.c];
                gov += t.weight * phase * base;
                // raised power picks up one more factor of i
                const cdouble raised = t.weight * phase * cdouble(0.0, 1.0);
                gx += raised * (hx[t.a + 1] * hy[t.b] * hz[t.c]);
                gy += raised * (hx[t.a] * hy[t.b + 1] * hz[t.c]);
                gz += raised * (hx[t.a] * hy[t.b] * hz[t.c + 1]);
            }
            ov += gauss * gov;
            dx += gauss * gx;
            dy += gauss * gy;
            dz += gauss * gz;
        }
        if (overlap != nullptr) *overlap = ov;
        return CVec3(dx + c.position.x() * ov, dy + c.position.y() * ov, dz + c.position.z() * ov);
    }

    /// d*_rec(Pi) = <psi_0| r |Pi>, summed over centres with their phases.
    CVec3 full(const Vec3& Pi, cdouble* overlap = nullptr) const {
        CVec3 sum = CVec3::Zero();
        cdouble ov_sum = 0.0;
        for (std::size_t i = 0; i < centers_.size(); ++i) {
            cdouble ov;
            const cdouble phase = std::polar(1.0, Pi.dot(centers_[i].position));
            sum += phase * stripped(i, Pi, &ov);
            ov_sum += phase * ov;
        }
        if (overlap != nullptr) *overlap = ov_sum;
        return sum;
    }

    /// Batch form of full(); evaluates the same scalar path per point.
    std::vector<CVec3> full(std::span<const Vec3> momenta) const {
        std::vector<CVec3> out;
        out.reserve(momenta.size());
        for (const auto& Pi : momenta) out.push_back(full(Pi));
        return out;
    }

  private:
    std::vector<Center> centers_;
};

/// Recombination dipole element d*_rec(Pi) = <psi_0|r|Pi> (full mode) or the
/// single-centre phase-stripped piece used inside the modified action.
inline CVec3 dipole_matrix_element(const Molecule& molecule, std::size_t orbital_index, const Vec3& Pi,
                                   ElementMode mode = ElementMode::full,
                                   std::optional<std::size_t> center_index = std::nullopt) {
    RecombinationKernel kernel(molecule, orbital_index);
    if (mode == ElementMode::full) return kernel.full(Pi);
    if (!center_index) throw ConfigError("per-centre mode needs a centre index");
    if (*center_index >= kernel.center_count())
        throw ConfigError("centre index " + std::to_string(*center_index) + " out of range");
    return kernel.stripped(*center_index, Pi);
}

/// d_ion(Pi) = <Pi|r|psi_0> = conj(d*_rec(Pi)) for a real orbital.
inline CVec3 ionization_matrix_element(const Molecule& molecule, std::size_t orbital_index, const Vec3& Pi,
                                       ElementMode mode = ElementMode::full,
                                       std::optional<std::size_t> center_index = std::nullopt) {
    return dipole_matrix_element(molecule, orbital_index, Pi, mode, center_index).conjugate();
}

/// (2pi)^{-3/2} int psi_0(r) exp(i Pi.r) dr
inline cdouble molecular_overlap(const Molecule& molecule, std::size_t orbital_index, const Vec3& Pi) {
    RecombinationKernel kernel(molecule, orbital_index);
    cdouble ov;
    kernel.full(Pi, &ov);
    return ov;
}

}  // namespace hhg
