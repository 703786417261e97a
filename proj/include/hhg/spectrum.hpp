#pragma once

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <mutex>
#include <string>
#include <vector>

#include "hhg/constants.hpp"
#include "hhg/error.hpp"
#include "hhg/lewenstein.hpp"
#include "hhg/molecule.hpp"

namespace hhg {

using cdouble = std::complex<double>;

namespace detail {

// FFTW's planner is not re-entrant; execution on distinct plans is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

/// One-sided DFT X_k = sum_n x_n exp(-2 pi i k n / N), k = 0..N/2.
inline std::vector<cdouble> real_dft(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    const int nout = n / 2 + 1;
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(nout);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
    }
    std::copy(x.begin(), x.end(), in);
    fftw_execute(plan);
    std::vector<cdouble> result(nout);
    for (int k = 0; k < nout; ++k) result[k] = {out[k][0], out[k][1]};
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return result;
}

}  // namespace detail

enum class WindowKind { hann, rectangular };

struct WindowSpec {
    WindowKind kind = WindowKind::hann;
};

/// Periodic Hann (w[N] would equal w[0]); with an integer number of cycles a
/// harmonic line leaks into its two neighbouring bins only.
inline std::vector<double> make_window(const WindowSpec& spec, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (spec.kind == WindowKind::hann)
        for (std::size_t k = 0; k < n; ++k) w[k] = 0.5 - 0.5 * std::cos(2.0 * units::pi * k / n);
    return w;
}

inline constexpr std::array<char, 3> axis_names = {'x', 'y', 'z'};

inline char axis_name(const Vec3& axis) {
    for (int d = 0; d < 3; ++d)
        if (std::abs(std::abs(axis[d]) - 1.0) < 1e-12) return axis_names[d];
    return '?';
}

struct HarmonicSpectrum {
    std::vector<double> orders;                    // omega / omega0
    std::array<std::vector<cdouble>, 3> amplitude; // omega^2 d(omega), windowed, times dt
    std::array<std::vector<double>, 3> intensity;  // |amplitude|^2
    Vec3 drive_axis = Vec3::UnitX();
    double omega = 0.0;
    double step = 0.0;
    std::size_t samples = 0;

    std::size_t size() const { return orders.size(); }
    double order_spacing() const { return orders.size() > 1 ? orders[1] - orders[0] : 0.0; }
    double cycles() const { return order_spacing() > 0.0 ? 1.0 / order_spacing() : 0.0; }

    /// Nearest bin to a harmonic order.
    std::size_t bin(double order) const {
        const double k = std::round(order / order_spacing());
        if (k < 0.0 || k >= static_cast<double>(orders.size()))
            throw ConfigError("harmonic order " + std::to_string(order) + " outside spectrum axis");
        return static_cast<std::size_t>(k);
    }
};

/// Windowed DFT of each dipole component, weighted by omega^2.
inline HarmonicSpectrum spectrum_from_series(const std::vector<std::array<double, 3>>& d, double dt, double omega,
                                             const Vec3& drive_axis, const WindowSpec& window = {}) {
    const std::size_t n = d.size();
    if (n < 4) throw ConfigError("series too short for a spectrum");
    if (!(dt > 0.0) || !(omega > 0.0)) throw ConfigError("spectrum needs positive step and carrier frequency");
    const auto w = make_window(window, n);
    HarmonicSpectrum s;
    s.drive_axis = drive_axis;
    s.omega = omega;
    s.step = dt;
    s.samples = n;
    const std::size_t nout = n / 2 + 1;
    const double domega = 2.0 * units::pi / (static_cast<double>(n) * dt);
    s.orders.resize(nout);
    for (std::size_t k = 0; k < nout; ++k) s.orders[k] = k * domega / omega;
    std::vector<double> buf(n);
    for (int c = 0; c < 3; ++c) {
        for (std::size_t k = 0; k < n; ++k) buf[k] = w[k] * d[k][c];
        const auto X = detail::real_dft(buf);
        s.amplitude[c].resize(nout);
        s.intensity[c].resize(nout);
        for (std::size_t k = 0; k < nout; ++k) {
            const double wk = k * domega;
            s.amplitude[c][k] = wk * wk * dt * X[k];
            s.intensity[c][k] = std::norm(s.amplitude[c][k]);
        }
    }
    return s;
}

inline std::vector<std::array<double, 3>> real_components(const std::vector<CVec3>& d) {
    std::vector<std::array<double, 3>> out(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) out[k] = {d[k].x().real(), d[k].y().real(), d[k].z().real()};
    return out;
}

inline HarmonicSpectrum spectrum_from_dipole(const DipoleTimeSeries& series, const WindowSpec& window = {}) {
    if (series.size() < 4) throw ConfigError("series too short for a spectrum");
    return spectrum_from_series(real_components(series.dipole), series.step(), series.omega, series.drive_axis,
                                window);
}

/// sum |w x|^2 and (1/N) sum_k |X_k|^2 over the two-sided spectrum; equal by Parseval.
struct ParsevalCheck {
    double signal_energy = 0.0;
    double spectral_energy = 0.0;
};

inline ParsevalCheck parseval_check(const std::vector<double>& x, const WindowSpec& window = {}) {
    const std::size_t n = x.size();
    const auto w = make_window(window, n);
    std::vector<double> buf(n);
    ParsevalCheck p;
    for (std::size_t k = 0; k < n; ++k) {
        buf[k] = w[k] * x[k];
        p.signal_energy += buf[k] * buf[k];
    }
    const auto X = detail::real_dft(buf);
    for (std::size_t k = 0; k < X.size(); ++k) {
        const bool self_mirror = k == 0 || (n % 2 == 0 && k == n / 2);
        p.spectral_energy += (self_mirror ? 1.0 : 2.0) * std::norm(X[k]);
    }
    p.spectral_energy /= static_cast<double>(n);
    return p;
}

/// Intensity of harmonic `order`: maximum over the Hann main lobe (line bin +-1).
inline double harmonic_peak(const HarmonicSpectrum& s, int component, double order) {
    const std::size_t k = s.bin(order);
    double best = s.intensity[component][k];
    if (k > 0) best = std::max(best, s.intensity[component][k - 1]);
    if (k + 1 < s.size()) best = std::max(best, s.intensity[component][k + 1]);
    return best;
}

inline int max_harmonic(const HarmonicSpectrum& s) {
    return static_cast<int>(std::floor(s.orders.back())) - 1;
}

/// Total power of a component between two orders (inclusive).
inline double band_power(const HarmonicSpectrum& s, int component, double lo, double hi) {
    double sum = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k)
        if (s.orders[k] >= lo && s.orders[k] <= hi) sum += s.intensity[component][k];
    return sum;
}

inline double to_db(double ratio) {
    return ratio > 0.0 ? 10.0 * std::log10(ratio) : -std::numeric_limits<double>::infinity();
}

struct SpectralMinimum {
    double lo = 0.0;
    double hi = 0.0;
    double center = 0.0;  // order of the deepest point
    double depth = 1.0;   // neighbouring envelope level / envelope at the dip
};

struct EnvelopeOptions {
    bool odd_only = true;
    double depth_factor = 10.0;
    int shoulder_width = 6;  // orders searched on each side for the reference level
    int min_order = 3;
    int max_order = 0;  // 0: up to the end of the axis
    double noise_floor = 1e-12;  // shoulders below this fraction of the envelope maximum are round-off
};

/// Per-harmonic peak envelope (orders, peaks) of one component.
inline std::vector<std::pair<int, double>> harmonic_envelope(const HarmonicSpectrum& s, int component,
                                                             bool odd_only, int min_order, int max_order) {
    std::vector<std::pair<int, double>> env;
    const int top = max_order > 0 ? std::min(max_order, max_harmonic(s)) : max_harmonic(s);
    for (int n = std::max(1, min_order); n <= top; ++n) {
        if (odd_only && n % 2 == 0) continue;
        env.emplace_back(n, harmonic_peak(s, component, n));
    }
    return env;
}

/// Intervals where the peak envelope sits more than depth_factor below the
/// lower of the two shoulder maxima around a local minimum.
inline std::vector<SpectralMinimum> find_envelope_minima_in(const std::vector<std::pair<int, double>>& env,
                                                            const EnvelopeOptions& opt) {
    std::vector<SpectralMinimum> found;
    const std::size_t n = env.size();
    if (n < 3) return found;
    const int step = n > 1 ? env[1].first - env[0].first : 1;
    const int span = std::max(1, opt.shoulder_width / std::max(step, 1));
    double top = 0.0;
    for (const auto& e : env) top = std::max(top, e.second);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double v = env[k].second;
        if (!(v <= env[k - 1].second && v <= env[k + 1].second)) continue;
        double left = 0.0, right = 0.0;
        for (std::size_t j = (k > static_cast<std::size_t>(span) ? k - span : 0); j < k; ++j)
            left = std::max(left, env[j].second);
        for (std::size_t j = k + 1; j < std::min(n, k + 1 + span); ++j) right = std::max(right, env[j].second);
        const double ref = std::min(left, right);
        if (!(ref > opt.depth_factor * v) || ref <= opt.noise_floor * top) continue;
        const double threshold = ref / opt.depth_factor;
        std::size_t a = k, b = k;
        while (a > 0 && env[a - 1].second < threshold) --a;
        while (b + 1 < n && env[b + 1].second < threshold) ++b;
        SpectralMinimum m;
        m.lo = env[a].first;
        m.hi = env[b].first;
        if (m.hi <= m.lo) {
            m.lo -= 0.5 * step;
            m.hi += 0.5 * step;
        }
        m.center = env[k].first;
        m.depth = v > 0.0 ? ref / v : std::numeric_limits<double>::infinity();
        found.push_back(m);
    }
    // merge overlapping intervals, keeping the deepest centre
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
    std::vector<SpectralMinimum> merged;
    for (const auto& m : found) {
        if (!merged.empty() && m.lo <= merged.back().hi) {
            auto& last = merged.back();
            last.hi = std::max(last.hi, m.hi);
            if (m.depth > last.depth) {
                last.depth = m.depth;
                last.center = m.center;
            }
        } else {
            merged.push_back(m);
        }
    }
    return merged;
}

inline std::vector<SpectralMinimum> find_envelope_minima(const HarmonicSpectrum& s, int component,
                                                         const EnvelopeOptions& opt = {}) {
    return find_envelope_minima_in(harmonic_envelope(s, component, opt.odd_only, opt.min_order, opt.max_order), opt);
}

struct PlateauFit {
    double plateau_end = 0.0;  // harmonic order
    double drop_db = 0.0;      // plateau median minus the upper envelope just past the edge
};

/// Plateau end: last order whose upper (suffix-maximum) log envelope is still
/// within drop_db of the running median of the peaks from min_order on. The
/// tail past the cutoff keeps steepening, so the largest local slope sits deep
/// in the tail rather than at the edge.
inline PlateauFit fit_plateau_end(const HarmonicSpectrum& s, int component, bool odd_only = true, int min_order = 15,
                                  double drop_db = 10.0) {
    auto env = harmonic_envelope(s, component, odd_only, min_order, 0);
    if (env.size() < 5) throw ConfigError("spectrum too short for a plateau fit");
    std::vector<double> upper(env.size());
    double run = 0.0;
    for (std::size_t k = env.size(); k-- > 0;) {
        run = std::max(run, env[k].second);
        upper[k] = to_db(run);
    }
    PlateauFit fit;
    fit.plateau_end = env.front().first;
    std::vector<double> seen;
    for (std::size_t k = 0; k < env.size(); ++k) {
        seen.push_back(to_db(env[k].second));
        auto mid = seen.begin() + seen.size() / 2;
        std::nth_element(seen.begin(), mid, seen.end());
        const double median = *mid;
        if (upper[k] < median - drop_db) {
            fit.drop_db = median - upper[k];
            break;
        }
        fit.plateau_end = env[k].first;
    }
    return fit;
}

struct ParityReport {
    double worst_margin_db = std::numeric_limits<double>::infinity();  // min over evens of (weaker odd neighbour / even)
    double median_margin_db = 0.0;
    int worst_order = 0;
};

/// Even-harmonic suppression relative to the weaker odd neighbour, over [lo, hi].
inline ParityReport even_harmonic_suppression(const HarmonicSpectrum& s, int component, int lo, int hi) {
    ParityReport r;
    std::vector<double> margins;
    for (int n = std::max(2, lo + lo % 2); n <= hi; n += 2) {
        const double even = harmonic_peak(s, component, n);
        const double odd = std::min(harmonic_peak(s, component, n - 1), harmonic_peak(s, component, n + 1));
        const double m = even > 0.0 ? to_db(odd / even) : std::numeric_limits<double>::infinity();
        margins.push_back(m);
        if (m < r.worst_margin_db) {
            r.worst_margin_db = m;
            r.worst_order = n;
        }
    }
    if (!margins.empty()) {
        std::nth_element(margins.begin(), margins.begin() + margins.size() / 2, margins.end());
        r.median_margin_db = margins[margins.size() / 2];
    }
    return r;
}

struct Polarization {
    double ellipticity = 0.0;  // minor / major, in [0, 1]
    Vec3 major_axis = Vec3::UnitX();
    double angle_to_drive = 0.0;  // radians, in [0, pi/2]
    double major = 0.0;
    double minor = 0.0;
};

/// Polarization ellipse of the complex 3-vector amplitude at a harmonic line.
inline Polarization polarization_of(const CVec3& E, const Vec3& drive_axis) {
    Polarization p;
    const cdouble ee = E.x() * E.x() + E.y() * E.y() + E.z() * E.z();
    const double theta = -0.5 * std::arg(ee);
    const CVec3 rotated = std::polar(1.0, theta) * E;
    Vec3 re = rotated.real();
    Vec3 im = rotated.imag();
    if (im.norm() > re.norm()) std::swap(re, im);
    p.major = re.norm();
    p.minor = im.norm();
    p.ellipticity = p.major > 0.0 ? p.minor / p.major : 0.0;
    if (p.major > 0.0) p.major_axis = re / p.major;
    p.angle_to_drive = std::acos(std::min(1.0, std::abs(p.major_axis.dot(drive_axis))));
    return p;
}

inline Polarization harmonic_polarization(const HarmonicSpectrum& s, int order) {
    if (order < 1 || order > max_harmonic(s) + 1) throw ConfigError("harmonic order outside spectrum axis");
    const std::size_t k = s.bin(order);
    return polarization_of(CVec3(s.amplitude[0][k], s.amplitude[1][k], s.amplitude[2][k]), s.drive_axis);
}

struct TimeFrequencyMap {
    std::vector<double> times;   // window centres, a.u.
    std::vector<double> orders;  // omega / omega0
    std::vector<double> magnitude;  // row-major [time][order]

    double at(std::size_t it, std::size_t io) const { return magnitude[it * orders.size() + io]; }
};

struct GaborOptions {
    double width = 0.0;        // Gaussian sigma in a.u.; 0: 1/(3 omega0)
    std::size_t time_stride = 4;  // samples between window centres
    double max_order = 0.0;    // 0: Nyquist
    bool acceleration = false; // weight by omega^2
};

/// |sum_n x_n g(t_n - t0) exp(-i w t_n) dt| with g = exp(-(t - t0)^2 / (2 sigma^2)).
inline TimeFrequencyMap gabor_map(const std::vector<double>& x, double t_start, double dt, double omega,
                                  const GaborOptions& opt = {}) {
    const std::size_t n = x.size();
    if (n < 4) throw ConfigError("series too short for a Gabor map");
    if (opt.time_stride == 0) throw ConfigError("Gabor time stride must be positive");
    const double sigma = opt.width > 0.0 ? opt.width : 1.0 / (3.0 * omega);
    const std::size_t nout = n / 2 + 1;
    const double domega = 2.0 * units::pi / (static_cast<double>(n) * dt);
    std::size_t kmax = nout;
    if (opt.max_order > 0.0)
        kmax = std::min(nout, static_cast<std::size_t>(std::floor(opt.max_order * omega / domega)) + 1);
    TimeFrequencyMap map;
    for (std::size_t k = 0; k < kmax; ++k) map.orders.push_back(k * domega / omega);
    for (std::size_t c = 0; c < n; c += opt.time_stride) map.times.push_back(t_start + c * dt);
    map.magnitude.assign(map.times.size() * kmax, 0.0);
    std::vector<double> buf(n);
    for (std::size_t it = 0; it < map.times.size(); ++it) {
        const double t0 = map.times[it];
        for (std::size_t k = 0; k < n; ++k) {
            const double u = (t_start + k * dt - t0) / sigma;
            buf[k] = x[k] * std::exp(-0.5 * u * u);
        }
        const auto X = detail::real_dft(buf);
        for (std::size_t k = 0; k < kmax; ++k) {
            const double w = k * domega;
            map.magnitude[it * kmax + k] = std::abs(X[k]) * dt * (opt.acceleration ? w * w : 1.0);
        }
    }
    return map;
}

inline TimeFrequencyMap gabor_map(const DipoleTimeSeries& series, int component, const GaborOptions& opt = {}) {
    if (component < 0 || component > 2) throw ConfigError("component must be 0, 1 or 2");
    std::vector<double> x(series.size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = series.dipole[k][component].real();
    return gabor_map(x, series.times.front(), series.step(), series.omega, opt);
}

/// Order of the strongest bin in each time row, restricted to [lo, hi].
inline std::vector<double> gabor_ridge(const TimeFrequencyMap& map, double lo, double hi) {
    std::vector<double> ridge(map.times.size(), 0.0);
    for (std::size_t it = 0; it < map.times.size(); ++it) {
        double best = -1.0;
        for (std::size_t io = 0; io < map.orders.size(); ++io) {
            if (map.orders[io] < lo || map.orders[io] > hi) continue;
            if (map.at(it, io) > best) {
                best = map.at(it, io);
                ridge[it] = map.orders[io];
            }
        }
    }
    return ridge;
}

/// Number of separated emission bursts at one order within each half cycle
/// [t0 + k T/2, t0 + (k+1) T/2): local maxima of |G(t, order)| above
/// `floor` times the half-cycle maximum. t0 is `origin` moved forward to the
/// first window centre at or after it (NaN: the first window centre).
inline std::vector<int> count_emission_bursts(const TimeFrequencyMap& map, double order, double period,
                                              double floor = 0.1,
                                              double origin = std::numeric_limits<double>::quiet_NaN()) {
    std::size_t io = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < map.orders.size(); ++k) {
        if (std::abs(map.orders[k] - order) < best) {
            best = std::abs(map.orders[k] - order);
            io = k;
        }
    }
    std::vector<int> counts;
    if (map.times.size() < 3) return counts;
    const double half = 0.5 * period;
    double t0 = map.times.front();
    if (std::isfinite(origin)) t0 = origin + std::ceil((map.times.front() - origin) / half) * half;
    const auto nhalf = static_cast<std::size_t>(std::floor((map.times.back() - t0) / half));
    for (std::size_t h = 0; h < nhalf; ++h) {
        const double a = t0 + h * half, b = a + half;
        double top = 0.0;
        for (std::size_t it = 0; it < map.times.size(); ++it)
            if (map.times[it] >= a && map.times[it] < b) top = std::max(top, map.at(it, io));
        int count = 0;
        for (std::size_t it = 1; it + 1 < map.times.size(); ++it) {
            if (map.times[it] < a || map.times[it] >= b) continue;
            const double v = map.at(it, io);
            if (v > map.at(it - 1, io) && v >= map.at(it + 1, io) && v > floor * top) ++count;
        }
        counts.push_back(count);
    }
    return counts;
}

}  // namespace hhg
