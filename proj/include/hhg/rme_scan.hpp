#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "hhg/error.hpp"
#include "hhg/field.hpp"
#include "hhg/gto_ft.hpp"
#include "hhg/molecule.hpp"
#include "hhg/parallel.hpp"
#include "hhg/spectrum.hpp"

/// Recombination matrix element along one momentum axis, with the kinetic
/// momentum tied to the harmonic order by  n w0 = Pi^2 / 2 + Ip.
namespace hhg {

enum class OrbitalSum { coherent, incoherent };

struct RmeSample {
    double pi = 0.0;     // scanned component
    double order = 0.0;
    std::array<double, 3> magnitude2{};  // |d_rec,c|^2
};

struct RmeScan {
    int scanned_axis = 0;
    std::array<double, 2> fixed{0.0, 0.0};  // the other two components, in axis order
    double ionization_potential = 0.0;
    double omega = 0.0;
    std::vector<std::string> orbital_labels;
    std::vector<RmeSample> samples;

    Vec3 momentum(double pi_scan) const {
        Vec3 p;
        int f = 0;
        for (int d = 0; d < 3; ++d) p[d] = d == scanned_axis ? pi_scan : fixed[f++];
        return p;
    }
    double fixed_norm2() const { return fixed[0] * fixed[0] + fixed[1] * fixed[1]; }
    double order_of(double pi_scan) const {
        return (0.5 * (pi_scan * pi_scan + fixed_norm2()) + ionization_potential) / omega;
    }
};

struct ScanOptions {
    double order_lo = 0.0;  // 0: threshold
    double order_hi = 80.0;
    double order_step = 0.05;
    std::array<double, 2> fixed{0.0, 0.0};
    OrbitalSum sum = OrbitalSum::coherent;
};

/// Scans the full-mode RME of the orbital set; the first orbital's Ip maps
/// momentum to order.
inline RmeScan scan_rme(const Molecule& molecule, const std::vector<std::size_t>& orbitals, const LaserField& field,
                        int scanned_axis, const ScanOptions& opt = {}) {
    if (orbitals.empty()) throw ConfigError("orbital set is empty");
    if (scanned_axis < 0 || scanned_axis > 2) throw ConfigError("scanned axis must be 0, 1 or 2");
    if (!(opt.order_step > 0.0)) throw ConfigError("scan order step must be positive");
    RmeScan scan;
    scan.scanned_axis = scanned_axis;
    scan.fixed = opt.fixed;
    scan.omega = field.omega;
    scan.ionization_potential = molecule.orbital(orbitals.front()).ionization_potential;
    std::vector<RecombinationKernel> kernels;
    for (auto idx : orbitals) {
        kernels.emplace_back(molecule, idx);
        scan.orbital_labels.push_back(molecule.orbital(idx).label);
    }
    const double threshold = (scan.ionization_potential + 0.5 * scan.fixed_norm2()) / field.omega;
    const double lo = opt.order_lo > 0.0 ? opt.order_lo : threshold;
    if (lo < threshold - 1e-12)
        throw ConfigError("order " + std::to_string(lo) + " is below the ionization threshold " +
                          std::to_string(threshold));
    if (!(opt.order_hi >= lo)) throw ConfigError("scan range is empty");
    const auto count = static_cast<std::size_t>(std::floor((opt.order_hi - lo) / opt.order_step + 1e-9)) + 1;
    scan.samples.resize(count);
    parallel_for(count, [&](std::size_t k) {
        const double order = lo + opt.order_step * static_cast<double>(k);
        const double pi2 = 2.0 * (order * field.omega - scan.ionization_potential) - scan.fixed_norm2();
        RmeSample s;
        s.pi = std::sqrt(std::max(0.0, pi2));
        s.order = order;
        const Vec3 P = scan.momentum(s.pi);
        CVec3 coherent = CVec3::Zero();
        for (const auto& kern : kernels) {
            const CVec3 d = kern.full(P);
            coherent += d;
            if (opt.sum == OrbitalSum::incoherent)
                for (int c = 0; c < 3; ++c) s.magnitude2[c] += std::norm(d[c]);
        }
        if (opt.sum == OrbitalSum::coherent)
            for (int c = 0; c < 3; ++c) s.magnitude2[c] = std::norm(coherent[c]);
        scan.samples[k] = s;
    });
    return scan;
}

struct RmeZero {
    int component = 0;
    int scanned_axis = 0;
    double order = 0.0;
    double pi = 0.0;
    double magnitude2 = 0.0;
    double depth = 0.0;  // local envelope / value
};

struct ZeroOptions {
    double depth_factor = 100.0;
    double envelope_window = 5.0;  // harmonic orders on each side
    double noise_floor = 1e-12;    // relative to the largest |d_c|^2 of the scan, any component
};

/// Local minima of |d_c|^2 at least depth_factor below the lower of the two
/// window maxima around them, refined by a parabola through (Pi, |d|^2).
inline std::vector<RmeZero> find_rme_zeros(const RmeScan& scan, int component, const ZeroOptions& opt = {}) {
    if (component < 0 || component > 2) throw ConfigError("component must be 0, 1 or 2");
    std::vector<RmeZero> zeros;
    const auto& s = scan.samples;
    if (s.size() < 3) return zeros;
    double peak = 0.0;
    for (const auto& x : s) peak = std::max({peak, x.magnitude2[0], x.magnitude2[1], x.magnitude2[2]});
    const double floor = opt.noise_floor * peak;
    for (std::size_t k = 1; k + 1 < s.size(); ++k) {
        const double v = s[k].magnitude2[component];
        if (!(v <= s[k - 1].magnitude2[component] && v < s[k + 1].magnitude2[component])) continue;
        double left = 0.0, right = 0.0;
        for (std::size_t j = k; j-- > 0 && s[k].order - s[j].order <= opt.envelope_window;)
            left = std::max(left, s[j].magnitude2[component]);
        for (std::size_t j = k + 1; j < s.size() && s[j].order - s[k].order <= opt.envelope_window; ++j)
            right = std::max(right, s[j].magnitude2[component]);
        const double ref = std::min(left, right);
        if (!(ref > opt.depth_factor * v) || !(ref > floor)) continue;
        RmeZero z;
        z.component = component;
        z.scanned_axis = scan.scanned_axis;
        z.pi = s[k].pi;
        z.magnitude2 = v;
        // parabola through the three samples in Pi
        const double x0 = s[k - 1].pi, x1 = s[k].pi, x2 = s[k + 1].pi;
        const double y0 = s[k - 1].magnitude2[component], y2 = s[k + 1].magnitude2[component];
        const double d01 = (v - y0) / (x1 - x0), d12 = (y2 - v) / (x2 - x1);
        const double curv = (d12 - d01) / (x2 - x0);
        if (curv > 0.0 && std::isfinite(curv)) {
            // y = y0 + d01 (x - x0) + curv (x - x0)(x - x1)
            const double vertex = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
            if (vertex >= x0 && vertex <= x2) {
                z.pi = vertex;
                z.magnitude2 = std::max(0.0, y0 + d01 * (vertex - x0) + curv * (vertex - x0) * (vertex - x1));
            }
        }
        z.order = scan.order_of(z.pi);
        z.depth = z.magnitude2 > 0.0 ? ref / z.magnitude2 : std::numeric_limits<double>::infinity();
        zeros.push_back(z);
    }
    return zeros;
}

struct MinimumMatch {
    SpectralMinimum minimum;
    std::vector<RmeZero> zeros;  // zeros inside [lo, hi]
    bool matched() const { return !zeros.empty(); }
};

struct CorrelationReport {
    std::vector<MinimumMatch> minima;
    std::size_t matched = 0;
    std::size_t unmatched = 0;  // interference candidates not explained by the RME
};

inline CorrelationReport correlate_minima(const std::vector<RmeZero>& zeros,
                                          const std::vector<SpectralMinimum>& minima) {
    CorrelationReport r;
    for (const auto& m : minima) {
        MinimumMatch mm{m, {}};
        for (const auto& z : zeros)
            if (z.order >= m.lo && z.order <= m.hi) mm.zeros.push_back(z);
        (mm.matched() ? r.matched : r.unmatched) += 1;
        r.minima.push_back(std::move(mm));
    }
    return r;
}

/// True when some zero falls inside [lo, hi].
inline bool zeros_in_band(const std::vector<RmeZero>& zeros, double lo, double hi) {
    return std::any_of(zeros.begin(), zeros.end(), [&](const RmeZero& z) { return z.order >= lo && z.order <= hi; });
}

}  // namespace hhg
