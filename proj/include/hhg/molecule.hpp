#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hhg/constants.hpp"
#include "hhg/error.hpp"

namespace hhg {

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

/// Exponents of x^a y^b z^c in a Cartesian Gaussian.
struct CartesianPowers {
    int a = 0;
    int b = 0;
    int c = 0;

    int total() const { return a + b + c; }
    int operator[](int dim) const { return dim == 0 ? a : (dim == 1 ? b : c); }
    auto operator<=>(const CartesianPowers&) const = default;
};

struct GaussianPrimitive {
    double exponent = 1.0;     // alpha_k, bohr^-2
    double coefficient = 1.0;  // eta_k
    bool operator==(const GaussianPrimitive&) const = default;
};

namespace detail {

inline double double_factorial_odd(int n) {  // (2n-1)!!, with (-1)!! = 1
    double r = 1.0;
    for (int k = 2 * n - 1; k > 1; k -= 2) r *= k;
    return r;
}

inline double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// int u^n exp(-p u^2) du over the real line.
inline double gaussian_moment_real(int n, double p) {
    if (n % 2 == 1) return 0.0;
    const int m = n / 2;
    return double_factorial_odd(m) / std::pow(2.0 * p, m) * std::sqrt(units::pi / p);
}

/// int (x-A)^a (x-B)^b exp(-alpha (x-A)^2 - beta (x-B)^2) dx
inline double overlap_1d(int a, int b, double alpha, double beta, double A, double B) {
    const double p = alpha + beta;
    const double P = (alpha * A + beta * B) / p;
    const double pa = P - A;
    const double pb = P - B;
    double sum = 0.0;
    for (int i = 0; i <= a; ++i) {
        for (int j = 0; j <= b; ++j) {
            if ((i + j) % 2 != 0) continue;
            sum += binomial(a, i) * binomial(b, j) * std::pow(pa, a - i) * std::pow(pb, b - j) *
                   gaussian_moment_real(i + j, p);
        }
    }
    return std::exp(-alpha * beta / p * (A - B) * (A - B)) * sum;
}

}  // namespace detail

/// Normalization of a single Cartesian primitive x^a y^b z^c exp(-alpha r^2).
inline double primitive_normalization(double alpha, const CartesianPowers& p) {
    const double l = p.total();
    return std::pow(2.0 * alpha / units::pi, 0.75) * std::pow(4.0 * alpha, l / 2.0) /
           std::sqrt(detail::double_factorial_odd(p.a) * detail::double_factorial_odd(p.b) *
                     detail::double_factorial_odd(p.c));
}

/// One Cartesian contracted function
///     phi(u) = N * sum_k eta_k u_x^a u_y^b u_z^c exp(-alpha_k |u|^2)
/// with the coefficients taken literally (they multiply raw primitives).
class ContractedShell {
  public:
    ContractedShell(CartesianPowers powers, std::vector<GaussianPrimitive> primitives,
                    double normalization)
        : powers_(powers), primitives_(std::move(primitives)), normalization_(normalization) {
        std::vector<std::string> errors;
        if (powers_.a < 0 || powers_.b < 0 || powers_.c < 0)
            errors.emplace_back("Cartesian powers must be non-negative");
        if (primitives_.empty()) errors.emplace_back("shell needs at least one primitive");
        for (const auto& prim : primitives_) {
            if (!(prim.exponent > 0.0) || !std::isfinite(prim.exponent))
                errors.emplace_back("exponent must be positive");
            if (!std::isfinite(prim.coefficient))
                errors.emplace_back("contraction coefficient must be finite");
        }
        if (!(normalization_ > 0.0) || !std::isfinite(normalization_))
            errors.emplace_back("normalization must be positive");
        if (!errors.empty()) throw ValidationError(std::move(errors));
    }

    /// Builds a unit-norm shell from coefficients that refer to normalized
    /// primitives (the quantum-chemistry convention). The primitive norms are
    /// folded into the stored coefficients and N renormalizes the contraction.
    static ContractedShell normalized(CartesianPowers powers,
                                      const std::vector<GaussianPrimitive>& primitives) {
        std::vector<GaussianPrimitive> raw;
        raw.reserve(primitives.size());
        for (const auto& prim : primitives) {
            if (!(prim.exponent > 0.0) || !std::isfinite(prim.exponent))
                throw ValidationError({"exponent must be positive"});
            raw.push_back({prim.exponent,
                           prim.coefficient * primitive_normalization(prim.exponent, powers)});
        }
        ContractedShell unnormalized(powers, raw, 1.0);
        const double s = unnormalized.self_overlap();
        if (!(s > 0.0)) throw ValidationError({"shell has zero norm"});
        return ContractedShell(powers, std::move(raw), 1.0 / std::sqrt(s));
    }

    const CartesianPowers& powers() const { return powers_; }
    const std::vector<GaussianPrimitive>& primitives() const { return primitives_; }
    double normalization() const { return normalization_; }
    int angular_index() const { return powers_.total(); }

    double value(const Vec3& u) const {
        const double r2 = u.squaredNorm();
        double radial = 0.0;
        for (const auto& prim : primitives_) radial += prim.coefficient * std::exp(-prim.exponent * r2);
        return normalization_ * std::pow(u.x(), powers_.a) * std::pow(u.y(), powers_.b) *
               std::pow(u.z(), powers_.c) * radial;
    }

    /// <phi|phi>, analytic.
    double self_overlap() const {
        double s = 0.0;
        for (const auto& pk : primitives_) {
            for (const auto& pl : primitives_) {
                const double p = pk.exponent + pl.exponent;
                s += pk.coefficient * pl.coefficient * detail::gaussian_moment_real(2 * powers_.a, p) *
                     detail::gaussian_moment_real(2 * powers_.b, p) *
                     detail::gaussian_moment_real(2 * powers_.c, p);
            }
        }
        return normalization_ * normalization_ * s;
    }

    bool operator==(const ContractedShell&) const = default;

  private:
    CartesianPowers powers_;
    std::vector<GaussianPrimitive> primitives_;
    double normalization_;
};

/// <phi_a(. - A)|phi_b(. - B)>, analytic (Gaussian product theorem).
inline double shell_overlap(const ContractedShell& sa, const Vec3& A, const ContractedShell& sb,
                            const Vec3& B) {
    double s = 0.0;
    for (const auto& pa : sa.primitives()) {
        for (const auto& pb : sb.primitives()) {
            double term = pa.coefficient * pb.coefficient;
            for (int d = 0; d < 3 && term != 0.0; ++d)
                term *= detail::overlap_1d(sa.powers()[d], sb.powers()[d], pa.exponent, pb.exponent,
                                           A[d], B[d]);
            s += term;
        }
    }
    return sa.normalization() * sb.normalization() * s;
}

struct AtomicCenter {
    Vec3 position = Vec3::Zero();  // bohr
    std::string element;
    std::vector<ContractedShell> shells;

    bool operator==(const AtomicCenter& o) const {
        return position == o.position && element == o.element && shells == o.shells;
    }
};

struct MolecularOrbital {
    std::string label;
    double ionization_potential = 0.0;  // hartree
    int degeneracy = 1;
    std::vector<double> coefficients;   // one per (center, shell), molecule order

    bool operator==(const MolecularOrbital&) const = default;
};

/// Immutable LCAO description of a molecule. Validated on construction.
class Molecule {
  public:
    Molecule(std::vector<AtomicCenter> centers, std::vector<MolecularOrbital> orbitals,
             Vec3 static_dipole_debye = Vec3::Zero(), std::string name = {})
        : centers_(std::move(centers)),
          orbitals_(std::move(orbitals)),
          static_dipole_(static_dipole_debye),
          name_(std::move(name)) {
        std::vector<std::string> errors;
        if (centers_.empty()) errors.emplace_back("molecule needs at least one center");
        std::size_t offset = 0;
        for (std::size_t i = 0; i < centers_.size(); ++i) {
            if (!centers_[i].position.allFinite())
                errors.push_back("center " + std::to_string(i) + ": position must be finite");
            offsets_.push_back(offset);
            offset += centers_[i].shells.size();
        }
        basis_size_ = offset;
        for (const auto& orb : orbitals_) {
            const std::string who = "orbital '" + orb.label + "'";
            if (!(orb.ionization_potential > 0.0) || !std::isfinite(orb.ionization_potential))
                errors.push_back(who + ": ionization potential must be positive");
            if (orb.degeneracy < 1) errors.push_back(who + ": degeneracy must be >= 1");
            if (orb.coefficients.size() != basis_size_)
                errors.push_back(who + ": has " + std::to_string(orb.coefficients.size()) +
                                 " coefficients, basis has " + std::to_string(basis_size_));
            for (double c : orb.coefficients) {
                if (!std::isfinite(c)) {
                    errors.push_back(who + ": coefficients must be finite");
                    break;
                }
            }
        }
        if (!static_dipole_.allFinite()) errors.emplace_back("static dipole must be finite");
        if (!errors.empty()) throw ValidationError(std::move(errors));
    }

    const std::vector<AtomicCenter>& centers() const { return centers_; }
    const std::vector<MolecularOrbital>& orbitals() const { return orbitals_; }
    const Vec3& static_dipole() const { return static_dipole_; }
    const std::string& name() const { return name_; }
    std::size_t basis_size() const { return basis_size_; }
    std::size_t shell_offset(std::size_t center) const { return offsets_.at(center); }

    const MolecularOrbital& orbital(std::size_t index) const {
        if (index >= orbitals_.size())
            throw ConfigError("orbital index " + std::to_string(index) + " out of range (" +
                              std::to_string(orbitals_.size()) + " orbitals)");
        return orbitals_[index];
    }

    std::optional<std::size_t> find_orbital(const std::string& label) const {
        for (std::size_t i = 0; i < orbitals_.size(); ++i)
            if (orbitals_[i].label == label) return i;
        return std::nullopt;
    }

    /// Every orbital carrying `label` (degenerate partners share one).
    std::vector<std::size_t> orbitals_labelled(const std::string& label) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < orbitals_.size(); ++i)
            if (orbitals_[i].label == label) out.push_back(i);
        return out;
    }

    bool operator==(const Molecule& o) const {
        return centers_ == o.centers_ && orbitals_ == o.orbitals_ &&
               static_dipole_ == o.static_dipole_ && name_ == o.name_;
    }

  private:
    std::vector<AtomicCenter> centers_;
    std::vector<MolecularOrbital> orbitals_;
    Vec3 static_dipole_;
    std::string name_;
    std::vector<std::size_t> offsets_;
    std::size_t basis_size_ = 0;
};

/// R_max: largest distance between two nuclei, 0 for a single atom.
inline double max_internuclear_distance(const Molecule& molecule) {
    const auto& c = molecule.centers();
    double best = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
            best = std::max(best, (c[i].position - c[j].position).norm());
    return best;
}

/// psi_0(r) = sum_j sum_l C_l phi_l(r - R_j)
inline double evaluate_orbital(const Molecule& molecule, std::size_t orbital_index, const Vec3& r) {
    const auto& orb = molecule.orbital(orbital_index);
    double psi = 0.0;
    std::size_t k = 0;
    for (const auto& center : molecule.centers()) {
        const Vec3 u = r - center.position;
        for (const auto& shell : center.shells) {
            if (orb.coefficients[k] != 0.0) psi += orb.coefficients[k] * shell.value(u);
            ++k;
        }
    }
    return psi;
}

/// <psi|psi> from analytic overlaps. Expected to be 1 for orbitals that come
/// from a converged SCF in the same basis.
inline double orbital_norm(const Molecule& molecule, std::size_t orbital_index) {
    const auto& orb = molecule.orbital(orbital_index);
    struct Ref {
        const ContractedShell* shell;
        const Vec3* center;
        double c;
    };
    std::vector<Ref> refs;
    std::size_t k = 0;
    for (const auto& center : molecule.centers()) {
        for (const auto& shell : center.shells) {
            if (orb.coefficients[k] != 0.0) refs.push_back({&shell, &center.position, orb.coefficients[k]});
            ++k;
        }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        norm += refs[i].c * refs[i].c * shell_overlap(*refs[i].shell, *refs[i].center, *refs[i].shell, *refs[i].center);
        for (std::size_t j = i + 1; j < refs.size(); ++j)
            norm += 2.0 * refs[i].c * refs[j].c *
                    shell_overlap(*refs[i].shell, *refs[i].center, *refs[j].shell, *refs[j].center);
    }
    return norm;
}

/// Labels of orbitals whose norm deviates from 1 by more than `tolerance`.
inline std::vector<std::string> orbitals_with_bad_norm(const Molecule& molecule, double tolerance = 0.01) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < molecule.orbitals().size(); ++i)
        if (std::abs(orbital_norm(molecule, i) - 1.0) > tolerance) out.push_back(molecule.orbitals()[i].label);
    return out;
}

}  // namespace hhg
