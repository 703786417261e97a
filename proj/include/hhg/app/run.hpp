#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "hhg/app/config.hpp"
#include "hhg/app/manifest.hpp"
#include "hhg/field.hpp"
#include "hhg/ingest.hpp"
#include "hhg/lewenstein.hpp"
#include "hhg/rme_scan.hpp"
#include "hhg/spectrum.hpp"

namespace hhg::app {

enum class Verb { diagnose, run, scan, gabor };

// exit codes
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_parse = 3;
inline constexpr int exit_convergence = 4;

inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const NumericalError*>(&e)) return exit_convergence;
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const StructuralError*>(&e) ||
        dynamic_cast<const ValidationError*>(&e))
        return exit_parse;
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const CapabilityError*>(&e)) return exit_config;
    return exit_failure;
}

inline Molecule load_configured_molecule(const RunConfig& c) {
    const std::string text = ingest::read_text_file(c.molecule);
    if (c.format == ingest::MoleculeFormat::native) return ingest::parse_native(text);
    auto opts = c.punch;
    if (opts.name.empty()) opts.name = c.molecule.stem().string();
    return ingest::parse_punch(ingest::split_punch(text, c.molecule.string()), opts);
}

inline std::vector<std::size_t> select_orbitals(const Molecule& m, const std::vector<std::string>& labels) {
    std::vector<std::size_t> out;
    for (const auto& label : labels) {
        const auto found = m.orbitals_labelled(label);
        if (found.empty()) {
            std::string known;
            for (const auto& o : m.orbitals()) known += (known.empty() ? "" : ", ") + o.label;
            throw ConfigError("orbital '" + label + "' not in molecule (has: " + known + ")");
        }
        for (auto i : found)
            if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
    }
    return out;
}

struct DiagnosticsRow {
    std::string label;
    double ip = 0.0;
    int degeneracy = 1;
    FieldDiagnostics d;
};

inline std::vector<DiagnosticsRow> diagnostics_table(const RunConfig& c, const Molecule& m) {
    const LaserField f = make_field(c, c.drive_axes.front());
    std::vector<DiagnosticsRow> rows;
    const double rmax = max_internuclear_distance(m);
    for (const auto& o : m.orbitals()) {
        bool seen = false;
        for (const auto& r : rows) seen = seen || (r.label == o.label && r.ip == o.ionization_potential);
        if (seen) continue;
        rows.push_back({o.label, o.ionization_potential, o.degeneracy, diagnostics(f, o.ionization_potential, rmax)});
    }
    return rows;
}

/// Odd-only envelopes unless the molecule carries a static dipole.
inline bool use_odd_only(const RunConfig& c, const Molecule& m) {
    if (c.analysis.odd_only) return *c.analysis.odd_only;
    return m.static_dipole().norm() < 1e-9;
}

/// Spectrum of a run; incoherent mode adds per-orbital intensities (amplitudes stay coherent).
inline HarmonicSpectrum run_spectrum(const DipoleTimeSeries& series, const WindowSpec& window, OrbitalSum sum) {
    HarmonicSpectrum s = spectrum_from_dipole(series, window);
    if (sum == OrbitalSum::incoherent && series.per_orbital.size() > 1) {
        for (auto& v : s.intensity) std::fill(v.begin(), v.end(), 0.0);
        for (const auto& orb : series.per_orbital) {
            const auto part = spectrum_from_series(real_components(orb), series.step(), series.omega,
                                                   series.drive_axis, window);
            for (int c = 0; c < 3; ++c)
                for (std::size_t k = 0; k < s.size(); ++k) s.intensity[c][k] += part.intensity[c][k];
        }
    }
    return s;
}

struct ConvergenceCheck {
    std::string refinement;
    double change = 0.0;      // sum |dI| / sum I over plateau peaks
    double max_change = 0.0;  // largest single-peak change among peaks within 20 dB of the strongest
    int max_change_order = 0;
};

/// Relative change of the plateau peaks of `component` between two spectra.
inline ConvergenceCheck compare_plateau(const HarmonicSpectrum& base, const HarmonicSpectrum& refined, int component,
                                        int lo, int hi, bool odd_only) {
    ConvergenceCheck r;
    hi = std::min({hi, max_harmonic(base), max_harmonic(refined)});
    double num = 0.0, den = 0.0, top = 0.0;
    for (int n = lo; n <= hi; ++n) top = std::max(top, harmonic_peak(base, component, n));
    for (int n = lo; n <= hi; ++n) {
        if (odd_only && n % 2 == 0) continue;
        const double a = harmonic_peak(base, component, n), b = harmonic_peak(refined, component, n);
        num += std::abs(b - a);
        den += a;
        if (a >= 0.01 * top && a > 0.0 && std::abs(b - a) / a > r.max_change) {
            r.max_change = std::abs(b - a) / a;
            r.max_change_order = n;
        }
    }
    r.change = den > 0.0 ? num / den : (num > 0.0 ? 1.0 : 0.0);
    return r;
}

namespace detail {

inline std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

inline std::string spectrum_csv(const HarmonicSpectrum& s, int component) {
    std::string out = "order,intensity,amplitude_re,amplitude_im\n";
    for (std::size_t k = 0; k < s.size(); ++k) {
        out += fmt("%.6f", s.orders[k]) + "," + fmt("%.10e", s.intensity[component][k]) + "," +
               fmt("%.10e", s.amplitude[component][k].real()) + "," + fmt("%.10e", s.amplitude[component][k].imag()) +
               "\n";
    }
    return out;
}

inline std::string scan_csv(const RmeScan& scan) {
    std::string out = "order,pi,d2_x,d2_y,d2_z\n";
    for (const auto& s : scan.samples)
        out += fmt("%.6f", s.order) + "," + fmt("%.10e", s.pi) + "," + fmt("%.10e", s.magnitude2[0]) + "," +
               fmt("%.10e", s.magnitude2[1]) + "," + fmt("%.10e", s.magnitude2[2]) + "\n";
    return out;
}

// rows: window centres; columns: harmonic orders
inline std::string gabor_csv(const TimeFrequencyMap& map) {
    std::string out = "time";
    for (double o : map.orders) out += "," + fmt("%.4f", o);
    out += "\n";
    for (std::size_t it = 0; it < map.times.size(); ++it) {
        out += fmt("%.6f", map.times[it]);
        for (std::size_t io = 0; io < map.orders.size(); ++io) out += "," + fmt("%.6e", map.at(it, io));
        out += "\n";
    }
    return out;
}

inline nlohmann::json minimum_json(const SpectralMinimum& m) {
    return {{"lo", m.lo}, {"hi", m.hi}, {"center", m.center}, {"depth", m.depth}};
}

inline nlohmann::json zero_json(const RmeZero& z) {
    return {{"component", std::string(1, axis_names[z.component])},
            {"scanned_axis", std::string(1, axis_names[z.scanned_axis])},
            {"order", z.order},
            {"pi", z.pi},
            {"magnitude2", z.magnitude2},
            {"depth", std::isfinite(z.depth) ? nlohmann::json(z.depth) : nlohmann::json("inf")}};
}

inline void prepare_output_dir(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (fs::exists(dir)) {
        if (!fs::is_directory(dir)) throw ConfigError(dir.string() + " exists and is not a directory");
        if (!fs::is_empty(dir)) {
            if (!fs::exists(dir / "manifest.json"))
                throw ConfigError("output directory " + dir.string() + " is not empty and holds no earlier run");
            for (const auto& e : fs::directory_iterator(dir)) fs::remove_all(e.path());
        }
    }
    fs::create_directories(dir);
}

}  // namespace detail

inline DipoleTimeSeries compute_series(const RunConfig& c, const Molecule& m, const std::vector<std::size_t>& orbitals,
                                       int axis, const GridConfig& g) {
    const LaserField f = make_field(c, axis);
    const TauGrid tau = TauGrid::for_field(f, g.tau_nodes, g.tau_max_cycles, g.tau_min, g.epsilon, g.panel_order);
    const TimeGrid times = TimeGrid::for_field(f, g.samples_per_cycle, g.cycles, g.discard_cycles);
    return DipoleEngine(m, orbitals, f, tau, c.channels).time_series(times);
}

/// Runs one verb end to end into c.output_dir. Returns the process exit code;
/// a failed stage leaves a partial manifest naming it.
inline int execute(const RunConfig& c, Verb verb, const std::filesystem::path& config_path = {}) {
    using nlohmann::json;
    detail::prepare_output_dir(c.output_dir);
    Manifest man(c.output_dir);
    man.set("verb", verb == Verb::run ? "run" : verb == Verb::scan ? "scan" : verb == Verb::gabor ? "gabor" : "diagnose");
    man.set("config", c.resolved);
    man.set("resolved_grids", {{"samples_per_cycle", c.grids.samples_per_cycle},
                               {"cycles", c.grids.cycles},
                               {"discard_cycles", c.grids.discard_cycles},
                               {"tau_nodes", c.grids.tau_nodes},
                               {"panel_order", c.grids.panel_order},
                               {"tau_min", c.grids.tau_min},
                               {"tau_max_cycles", c.grids.tau_max_cycles},
                               {"epsilon", c.grids.epsilon},
                               {"quick", c.quick}});
    try {
        if (!config_path.empty()) man.add_input("config", config_path);
        man.add_input("molecule", c.molecule);
        const Molecule mol = man.stage("load", [&] { return load_configured_molecule(c); });
        const auto orbitals = select_orbitals(mol, c.orbitals);
        for (const auto& bad : orbitals_with_bad_norm(mol))
            std::fprintf(stderr, "warning: orbital %s is not normalized to 1%%\n", bad.c_str());

        const auto rows = man.stage("diagnostics", [&] {
            const auto t = diagnostics_table(c, mol);
            json d = json::array();
            for (const auto& r : t) {
                if (r.d.q_parameter > 0.5)
                    std::fprintf(stderr, "warning: Q = %.3f > 0.5, the length-gauge treatment is doubtful\n",
                                 r.d.q_parameter);
                d.push_back({{"orbital", r.label},
                             {"ionization_potential", r.ip},
                             {"degeneracy", r.degeneracy},
                             {"ponderomotive_energy", r.d.ponderomotive_energy},
                             {"quiver_radius", r.d.quiver_radius},
                             {"r_max", max_internuclear_distance(mol)},
                             {"q_parameter", r.d.q_parameter},
                             {"cutoff_order", r.d.cutoff_order}});
            }
            man.write_file("diagnostics.json", json{{"molecule", mol.name()}, {"orbitals", d}}.dump(2) + "\n");
            return t;
        });
        double predicted_cutoff = 0.0;
        for (const auto& r : rows)
            if (r.label == mol.orbital(orbitals.front()).label) predicted_cutoff = r.d.cutoff_order;

        const bool odd = use_odd_only(c, mol);
        json summary = {{"molecule", mol.name()}, {"orbitals", c.orbitals}, {"odd_only", odd}, {"drives", json::array()}};
        json zeros_doc = {{"zeros", json::array()}, {"correlation", json::array()}};
        std::vector<RmeZero> all_zeros;

        if (verb == Verb::run || verb == Verb::scan) {
            if (verb == Verb::scan || c.analysis.scans) {
                man.stage("scans", [&] {
                    ScanOptions so;
                    so.order_hi = c.analysis.scan_order_max;
                    so.order_step = c.analysis.scan_order_step;
                    so.fixed = c.analysis.scan_fixed;
                    so.sum = c.orbital_sum;
                    ZeroOptions zo;
                    zo.depth_factor = c.analysis.zero_depth;
                    zo.envelope_window = c.analysis.zero_window;
                    for (int axis = 0; axis < 3; ++axis) {
                        const auto scan = scan_rme(mol, orbitals, make_field(c, c.drive_axes.front()), axis, so);
                        man.write_file(std::string("scan_") + axis_names[axis] + ".csv", detail::scan_csv(scan));
                        for (int comp = 0; comp < 3; ++comp)
                            for (const auto& z : find_rme_zeros(scan, comp, zo)) {
                                all_zeros.push_back(z);
                                zeros_doc["zeros"].push_back(detail::zero_json(z));
                            }
                    }
                });
            }
        }

        bool converged = true;
        if (verb == Verb::run || verb == Verb::gabor) {
            for (int axis : c.drive_axes) {
                const char dn = axis_names[axis];
                const auto series = man.stage(std::string("dipole ") + dn,
                                              [&] { return compute_series(c, mol, orbitals, axis, c.grids); });
                json drive = {{"drive", std::string(1, dn)}};
                if (verb == Verb::run && c.analysis.spectra) {
                    man.stage(std::string("spectrum ") + dn, [&] {
                        const auto s = run_spectrum(series, {c.analysis.window}, c.orbital_sum);
                        json responses = json::array();
                        for (int comp = 0; comp < 3; ++comp) {
                            man.write_file(std::string("spectrum_") + dn + "_" + axis_names[comp] + ".csv",
                                           detail::spectrum_csv(s, comp));
                            double power = 0.0;
                            for (double v : s.intensity[comp]) power += v;
                            json r = {{"response", std::string(1, axis_names[comp])}, {"total_power", power}};
                            if (power > 0.0 && max_harmonic(s) >= 20) {
                                const auto fit = fit_plateau_end(s, comp, odd, 15);
                                r["plateau_end"] = fit.plateau_end;
                                r["plateau_drop_db"] = fit.drop_db;
                                const int hi = std::min(max_harmonic(s), static_cast<int>(predicted_cutoff));
                                const auto parity = even_harmonic_suppression(s, comp, 10, hi);
                                r["even_suppression_worst_db"] = std::isfinite(parity.worst_margin_db)
                                                                     ? json(parity.worst_margin_db)
                                                                     : json("inf");
                                r["even_suppression_median_db"] = parity.median_margin_db;
                                EnvelopeOptions eo;
                                eo.odd_only = odd;
                                eo.depth_factor = c.analysis.envelope_depth;
                                eo.shoulder_width = c.analysis.shoulder_width;
                                eo.min_order = c.analysis.envelope_min_order;
                                eo.max_order = static_cast<int>(std::ceil(predicted_cutoff)) + 3;
                                const auto minima = find_envelope_minima(s, comp, eo);
                                json mj = json::array();
                                for (const auto& m : minima) mj.push_back(detail::minimum_json(m));
                                r["envelope_minima"] = mj;
                                if (c.analysis.correlation && !all_zeros.empty()) {
                                    const auto rep = correlate_minima(all_zeros, minima);
                                    json cj = json::array();
                                    for (const auto& mm : rep.minima) {
                                        json zs = json::array();
                                        for (const auto& z : mm.zeros) zs.push_back(detail::zero_json(z));
                                        cj.push_back({{"minimum", detail::minimum_json(mm.minimum)},
                                                      {"matched", mm.matched()},
                                                      {"zeros", zs}});
                                    }
                                    zeros_doc["correlation"].push_back({{"drive", std::string(1, dn)},
                                                                        {"response", std::string(1, axis_names[comp])},
                                                                        {"matched", rep.matched},
                                                                        {"unmatched", rep.unmatched},
                                                                        {"minima", cj}});
                                }
                            }
                            responses.push_back(r);
                        }
                        drive["predicted_cutoff"] = predicted_cutoff;
                        drive["responses"] = responses;
                        if (c.analysis.polarization && max_harmonic(s) >= 20) {
                            json pol = json::array();
                            for (int n = 15; n <= std::min(max_harmonic(s), static_cast<int>(predicted_cutoff)); n += 2) {
                                const auto p = harmonic_polarization(s, n);
                                pol.push_back({{"order", n},
                                               {"ellipticity", p.ellipticity},
                                               {"angle_to_drive", p.angle_to_drive}});
                            }
                            drive["polarization"] = pol;
                        }
                        if (c.convergence.enabled) {
                            GridConfig tau2 = c.grids, time2 = c.grids;
                            tau2.tau_nodes *= 2;
                            time2.samples_per_cycle *= 2;
                            const int lo = c.convergence.min_order;
                            const int hi = static_cast<int>(std::floor(predicted_cutoff));
                            json checks = json::array();
                            for (const auto& [name, g] : {std::pair{"tau_nodes x2", tau2}, std::pair{"samples x2", time2}}) {
                                const auto s2 = run_spectrum(compute_series(c, mol, orbitals, axis, g),
                                                             {c.analysis.window}, c.orbital_sum);
                                auto chk = compare_plateau(s, s2, axis, lo, hi, odd);
                                chk.refinement = name;
                                const bool ok = chk.change < c.convergence.tolerance && chk.max_change < c.convergence.tolerance;
                                converged = converged && ok;
                                checks.push_back({{"refinement", name},
                                                  {"relative_change", chk.change},
                                                  {"max_peak_change", chk.max_change},
                                                  {"max_peak_change_order", chk.max_change_order},
                                                  {"passed", ok}});
                                std::fprintf(stderr, "[hhg] convergence %s: relative change %.4f, worst peak %.4f at H%d (%s)\n",
                                             name, chk.change, chk.max_change, chk.max_change_order,
                                             ok ? "ok" : "FAILED");
                            }
                            drive["convergence"] = checks;
                        }
                    });
                }
                if (verb == Verb::gabor || c.analysis.gabor) {
                    man.stage(std::string("gabor ") + dn, [&] {
                        GaborOptions go;
                        go.width = c.analysis.gabor_width;
                        go.time_stride = c.analysis.gabor_time_stride;
                        go.max_order = c.analysis.gabor_max_order;
                        for (int comp = 0; comp < 3; ++comp) {
                            if (comp != axis && !c.analysis.gabor_all_components) continue;
                            const auto map = gabor_map(series, comp, go);
                            man.write_file(std::string("gabor_") + dn + "_" + axis_names[comp] + ".csv",
                                           detail::gabor_csv(map));
                        }
                    });
                }
                summary["drives"].push_back(drive);
            }
        }
        if (verb == Verb::run) man.write_file("summary.json", summary.dump(2) + "\n");
        if (verb == Verb::run || verb == Verb::scan) man.write_file("zeros.json", zeros_doc.dump(2) + "\n");
        if (!converged) throw NumericalError("convergence gate failed: plateau peaks changed by more than " +
                                            detail::fmt("%.3g", c.convergence.tolerance) + " under grid refinement");
        man.finish_ok();
        return exit_ok;
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        std::fprintf(stderr, "error: %s\n", e.what());
        std::string stage = man.current_stage();
        if (stage.empty()) stage = code == exit_convergence ? "convergence" : "setup";
        man.finish_failed(stage, e.what(), code);
        return code;
    }
}

}  // namespace hhg::app
