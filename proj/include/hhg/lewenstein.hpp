#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "hhg/constants.hpp"
#include "hhg/error.hpp"
#include "hhg/field.hpp"
#include "hhg/gto_ft.hpp"
#include "hhg/molecule.hpp"
#include "hhg/parallel.hpp"
#include "hhg/quadrature.hpp"

/// Saddle-point (in momentum) Lewenstein dipole for a multi-centre LCAO state
/// with the centre-dependent action
///   S = int_{t'}^{t} [(p - eA)^2/2 + Ip] + p.(R_j - R_i) + e A(t).R_i - e A(t').R_j
/// and explicit quadrature over the return time tau = t - t'.
namespace hhg {

enum class ChannelFilter { all, direct, transfer };

inline bool channel_included(ChannelFilter filter, std::size_t i, std::size_t j) {
    switch (filter) {
        case ChannelFilter::direct: return i == j;
        case ChannelFilter::transfer: return i != j;
        default: return true;
    }
}

struct ChannelPair {
    std::size_t recombination_center;
    std::size_t ionization_center;
    bool direct() const { return recombination_center == ionization_center; }
};

/// Return-time quadrature: composite Gauss-Legendre on [tau_min, tau_max].
struct TauGrid {
    double tau_min = 0.05;
    double tau_max = 0.0;
    double epsilon = 1e-4;
    std::size_t panel_order = 8;
    QuadratureRule rule;

    TauGrid() = default;
    TauGrid(double tmin, double tmax, std::size_t nodes, double eps = 1e-4, std::size_t order = 8)
        : tau_min(tmin), tau_max(tmax), epsilon(eps), panel_order(order) {
        if (!(tmin > 0.0) || !(tmax > tmin)) throw ConfigError("tau grid needs 0 < tau_min < tau_max");
        if (!(eps > 0.0)) throw ConfigError("tau regularization epsilon must be positive");
        if (order == 0 || nodes < order) throw ConfigError("tau grid needs at least one full panel");
        rule = composite_gauss_legendre(tmin, tmax, nodes / order, order);
    }

    /// tau_max given in optical periods of `field`.
    static TauGrid for_field(const LaserField& field, std::size_t nodes, double tau_max_cycles = 1.5,
                             double tmin = 0.05, double eps = 1e-4, std::size_t order = 8) {
        return TauGrid(tmin, tau_max_cycles * field.period(), nodes, eps, order);
    }

    std::size_t size() const { return rule.size(); }
};

struct ActionValue {
    double action = 0.0;
    double gradient_norm = 0.0;  // |grad_p S|, zero at the saddle
};

/// p_s = (e int_{t-tau}^{t} A + (R_i - R_j)) / tau
inline Vec3 saddle_momentum(const LaserField& field, double t, double tau, const Vec3& Ri, const Vec3& Rj) {
    if (!(tau > 0.0)) throw ConfigError("saddle momentum needs tau > 0");
    return (units::electron_charge * integral_A(field, t - tau, t) + (Ri - Rj)) / tau;
}

inline ActionValue modified_action(const LaserField& field, double ip, double t, double tau, const Vec3& Ri,
                                   const Vec3& Rj, const Vec3& p) {
    if (!(tau > 0.0)) throw ConfigError("modified action needs tau > 0");
    const double e = units::electron_charge;
    const double tp = t - tau;
    const Vec3 ia = integral_A(field, tp, t);
    const double ia2 = integral_A2(field, tp, t);
    const double kinetic = 0.5 * (p.squaredNorm() * tau - 2.0 * e * p.dot(ia) + e * e * ia2);
    ActionValue out;
    out.action = kinetic + ip * tau + p.dot(Rj - Ri) + e * vector_potential(field, t).dot(Ri) -
                 e * vector_potential(field, tp).dot(Rj);
    out.gradient_norm = (p * tau - e * ia + (Rj - Ri)).norm();
    return out;
}

/// Uniform time grid.
struct TimeGrid {
    double start = 0.0;
    double step = 1.0;
    std::size_t count = 0;

    double operator[](std::size_t k) const { return start + step * static_cast<double>(k); }

    /// n_cycles of samples_per_cycle points each, starting after discard_cycles.
    static TimeGrid for_field(const LaserField& field, std::size_t samples_per_cycle, std::size_t n_cycles,
                              std::size_t discard_cycles) {
        if (samples_per_cycle < 2 || n_cycles == 0) throw ConfigError("time grid too small");
        const double T = field.period();
        return {field.turn_on_time + T * static_cast<double>(discard_cycles),
                T / static_cast<double>(samples_per_cycle), samples_per_cycle * n_cycles};
    }
};

struct DipoleTimeSeries {
    std::vector<double> times;
    std::vector<CVec3> dipole;                      // coherent sum over orbitals
    std::vector<std::vector<CVec3>> per_orbital;    // one series per orbital (same order as labels)
    Vec3 drive_axis = Vec3::UnitX();
    double omega = 0.0;
    ChannelFilter channels = ChannelFilter::all;
    std::vector<std::string> orbital_labels;

    std::size_t size() const { return times.size(); }
    double step() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

/// Evaluates d(t) for a fixed molecule / orbital set / field / tau grid.
/// Holds only read-only tables, so one engine can serve many threads.
class DipoleEngine {
  public:
    DipoleEngine(const Molecule& molecule, std::vector<std::size_t> orbitals, LaserField field, TauGrid grid,
                 ChannelFilter channels = ChannelFilter::all)
        : field_(std::move(field)), grid_(std::move(grid)), channels_(channels), orbitals_(std::move(orbitals)) {
        if (orbitals_.empty()) throw ConfigError("orbital set is empty");
        if (grid_.size() == 0) throw ConfigError("tau grid is empty");
        field_.validate();
        for (std::size_t idx : orbitals_) {
            kernels_.emplace_back(molecule, idx);
            ips_.push_back(molecule.orbital(idx).ionization_potential);
            labels_.push_back(molecule.orbital(idx).label);
        }
        for (const auto& c : molecule.centers()) positions_.push_back(c.position);
        for (std::size_t i = 0; i < positions_.size(); ++i)
            for (std::size_t j = 0; j < positions_.size(); ++j)
                if (channel_included(channels_, i, j)) pairs_.push_back({i, j});
        spreading_.reserve(grid_.size());
        for (std::size_t k = 0; k < grid_.size(); ++k) {
            const double tau = grid_.rule.nodes[k];
            spreading_.push_back(grid_.rule.weights[k] *
                                 std::pow(cdouble(2.0 * units::pi, 0.0) / cdouble(grid_.epsilon, tau), 1.5));
        }
    }

    const LaserField& field() const { return field_; }
    const TauGrid& tau_grid() const { return grid_; }
    const std::vector<std::string>& orbital_labels() const { return labels_; }
    std::size_t orbital_count() const { return kernels_.size(); }
    const std::vector<ChannelPair>& pairs() const { return pairs_; }

    /// d(t) + c.c. for each orbital of the set (real values in complex storage).
    std::vector<CVec3> orbital_dipoles(double t) const {
        const double e = units::electron_charge;
        const std::size_t norb = kernels_.size();
        std::vector<CVec3> total(norb, CVec3::Zero());
        std::vector<CVec3> per_tau(norb);
        const Vec3 a_t = vector_potential(field_, t);
        for (std::size_t k = 0; k < grid_.size(); ++k) {
            const double tau = grid_.rule.nodes[k];
            const double tp = t - tau;
            if (tp <= field_.turn_on_time) break;  // E(t') = 0 from here on
            const Vec3 e_tp = electric_field(field_, tp);
            const Vec3 a_tp = vector_potential(field_, tp);
            const Vec3 ia = integral_A(field_, tp, t);
            const double ia2 = integral_A2(field_, tp, t);
            const Vec3 drift = e * ia;
            for (auto& v : per_tau) v.setZero();
            for (const auto& pair : pairs_) {
                const Vec3& Ri = positions_[pair.recombination_center];
                const Vec3& Rj = positions_[pair.ionization_center];
                const Vec3 p = (drift + (Ri - Rj)) / tau;
#ifndef NDEBUG
                assert((p * tau - drift + (Rj - Ri)).norm() < 1e-10 * (1.0 + drift.norm()));
#endif
                const double kinetic = 0.5 * (p.squaredNorm() * tau - 2.0 * p.dot(drift) + e * e * ia2);
                const double geometric = p.dot(Rj - Ri) + e * a_t.dot(Ri) - e * a_tp.dot(Rj);
                const Vec3 pi_rec = p - e * a_t;
                const Vec3 pi_ion = p - e * a_tp;
                for (std::size_t o = 0; o < norb; ++o) {
                    const double action = kinetic + ips_[o] * tau + geometric;
                    const CVec3 rec = kernels_[o].stripped(pair.recombination_center, pi_rec);
                    const CVec3 ion_conj = kernels_[o].stripped(pair.ionization_center, pi_ion);
                    // d_ion = conj(stripped); project on E(t')
                    const cdouble coupling = std::conj(ion_conj.x()) * e_tp.x() +
                                             std::conj(ion_conj.y()) * e_tp.y() +
                                             std::conj(ion_conj.z()) * e_tp.z();
                    per_tau[o] += (std::polar(1.0, -action) * coupling) * rec;
                }
            }
            for (std::size_t o = 0; o < norb; ++o) total[o] += spreading_[k] * per_tau[o];
        }
        const cdouble prefactor(0.0, e * e);
        for (auto& d : total) {
            const CVec3 amp = prefactor * d;
            d = CVec3(2.0 * amp.x().real(), 2.0 * amp.y().real(), 2.0 * amp.z().real());
        }
        return total;
    }

    /// Coherent sum over the orbital set.
    CVec3 dipole_at_time(double t) const {
        CVec3 sum = CVec3::Zero();
        for (const auto& d : orbital_dipoles(t)) sum += d;
        return sum;
    }

    DipoleTimeSeries time_series(const TimeGrid& grid, std::size_t workers = worker_count()) const {
        if (grid.count < 2) throw ConfigError("time series needs at least two samples");
        DipoleTimeSeries out;
        out.drive_axis = field_.axis;
        out.omega = field_.omega;
        out.channels = channels_;
        out.orbital_labels = labels_;
        out.times.resize(grid.count);
        out.dipole.assign(grid.count, CVec3::Zero());
        out.per_orbital.assign(kernels_.size(), std::vector<CVec3>(grid.count, CVec3::Zero()));
        parallel_for(
            grid.count,
            [&](std::size_t n) {
                const double t = grid[n];
                out.times[n] = t;
                const auto values = orbital_dipoles(t);
                CVec3 sum = CVec3::Zero();
                for (std::size_t o = 0; o < values.size(); ++o) {
                    out.per_orbital[o][n] = values[o];
                    sum += values[o];
                }
                out.dipole[n] = sum;
            },
            workers);
        return out;
    }

  private:
    LaserField field_;
    TauGrid grid_;
    ChannelFilter channels_;
    std::vector<std::size_t> orbitals_;
    std::vector<RecombinationKernel> kernels_;
    std::vector<double> ips_;
    std::vector<std::string> labels_;
    std::vector<Vec3> positions_;
    std::vector<ChannelPair> pairs_;
    std::vector<cdouble> spreading_;  // w_k (2 pi / (eps + i tau_k))^{3/2}
};

inline CVec3 dipole_at_time(const Molecule& molecule, const std::vector<std::size_t>& orbitals,
                            const LaserField& field, double t, const TauGrid& grid,
                            ChannelFilter channels = ChannelFilter::all) {
    return DipoleEngine(molecule, orbitals, field, grid, channels).dipole_at_time(t);
}

inline DipoleTimeSeries dipole_time_series(const Molecule& molecule, const std::vector<std::size_t>& orbitals,
                                           const LaserField& field, const TimeGrid& times, const TauGrid& grid,
                                           ChannelFilter channels = ChannelFilter::all) {
    return DipoleEngine(molecule, orbitals, field, grid, channels).time_series(times);
}

}  // namespace hhg
