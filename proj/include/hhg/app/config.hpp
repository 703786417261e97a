#pragma once

#include <json.hpp>

#include <array>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hhg/error.hpp"
#include "hhg/field.hpp"
#include "hhg/ingest.hpp"
#include "hhg/lewenstein.hpp"
#include "hhg/rme_scan.hpp"
#include "hhg/spectrum.hpp"

// Run configuration: a JSON document, every key optional except the molecule.
namespace hhg::app {

using json = nlohmann::json;

struct GridConfig {
    std::size_t samples_per_cycle = 512;
    std::size_t cycles = 8;
    std::size_t discard_cycles = 2;
    std::size_t tau_nodes = 256;
    std::size_t panel_order = 8;
    double tau_min = 0.05;
    double tau_max_cycles = 1.5;
    double epsilon = 1e-4;
};

// Reduced grids for CI and desk-scale acceptance runs.
inline GridConfig quick_grids() {
    GridConfig g;
    g.samples_per_cycle = 256;
    g.cycles = 6;
    g.tau_nodes = 256;
    return g;
}

struct AnalysisConfig {
    bool spectra = true;
    bool scans = true;
    bool gabor = true;
    bool polarization = true;
    bool correlation = true;
    WindowKind window = WindowKind::hann;
    std::optional<bool> odd_only;  // unset: odd only when the molecule has no static dipole
    double envelope_depth = 10.0;
    int shoulder_width = 6;
    int envelope_min_order = 3;
    double zero_depth = 100.0;
    double zero_window = 5.0;
    double scan_order_step = 0.05;
    double scan_order_max = 80.0;
    std::array<double, 2> scan_fixed{0.0, 0.0};
    double gabor_width = 0.0;  // a.u.; 0: 1/(3 omega0)
    std::size_t gabor_time_stride = 4;
    double gabor_max_order = 100.0;
    bool gabor_all_components = false;
};

struct ConvergenceConfig {
    bool enabled = false;
    double tolerance = 0.05;
    int min_order = 15;
};

struct RunConfig {
    std::filesystem::path molecule;
    ingest::MoleculeFormat format = ingest::MoleculeFormat::native;
    ingest::PunchOptions punch;
    double e0 = 0.0;
    double omega = 0.0;
    VectorPotentialConvention convention = VectorPotentialConvention::turn_on_zero;
    std::vector<int> drive_axes{0};
    std::vector<std::string> orbitals{"HOMO"};
    OrbitalSum orbital_sum = OrbitalSum::coherent;
    ChannelFilter channels = ChannelFilter::all;
    GridConfig grids;
    bool quick = false;
    AnalysisConfig analysis;
    ConvergenceConfig convergence;
    std::filesystem::path output_dir = "hhg_out";
    json resolved;  // the document after overrides, as read
};

namespace detail {

class Reader {
  public:
    Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError(where_ + " must be an object");
    }

    void allow(std::initializer_list<const char*> keys) {
        std::set<std::string> ok(keys.begin(), keys.end());
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!ok.count(it.key())) throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
    }

    bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
    const json& at(const char* key) const { return j_.at(key); }
    std::string path(const char* key) const { return where_ + "." + key; }

    template <class T>
    void get(const char* key, T& out) const {
        if (!has(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(path(key) + ": wrong type");
        }
    }

    double positive(const char* key, double fallback) const {
        double v = fallback;
        get(key, v);
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(path(key) + " must be positive");
        return v;
    }

    std::size_t count(const char* key, std::size_t fallback, std::size_t minimum = 1) const {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(minimum))
            throw ConfigError(path(key) + " must be an integer >= " + std::to_string(minimum));
        return v.get<std::size_t>();
    }

  private:
    const json& j_;
    std::string where_;
};

inline int parse_axis(const std::string& s, const std::string& where) {
    if (s == "x" || s == "X") return 0;
    if (s == "y" || s == "Y") return 1;
    if (s == "z" || s == "Z") return 2;
    throw ConfigError(where + ": axis must be x, y or z, got '" + s + "'");
}

}  // namespace detail

inline std::vector<int> parse_axes(const json& j, const std::string& where) {
    std::vector<int> axes;
    auto add = [&](const std::string& s) {
        const int a = detail::parse_axis(s, where);
        if (std::find(axes.begin(), axes.end(), a) == axes.end()) axes.push_back(a);
    };
    if (j.is_string()) {
        for (char c : j.get<std::string>())
            if (c != ',' && c != ' ') add(std::string(1, c));
    } else if (j.is_array()) {
        for (const auto& e : j) {
            if (!e.is_string()) throw ConfigError(where + ": axes must be strings");
            add(e.get<std::string>());
        }
    } else {
        throw ConfigError(where + ": expected a list of axes");
    }
    if (axes.empty()) throw ConfigError(where + ": at least one axis is required");
    return axes;
}

/// Builds a RunConfig; relative paths are taken from `base_dir`.
inline RunConfig parse_run_config(const json& doc, const std::filesystem::path& base_dir = {}) {
    RunConfig c;
    c.resolved = doc;
    detail::Reader top(doc, "config");
    top.allow({"molecule", "laser", "drive_axes", "orbitals", "orbital_sum", "channels", "grids", "quick",
               "analysis", "convergence", "output_dir"});

    if (!top.has("molecule")) throw ConfigError("config.molecule is required");
    {
        const json& m = top.at("molecule");
        json mol = m.is_string() ? json{{"path", m}} : m;
        detail::Reader r(mol, "config.molecule");
        r.allow({"path", "format", "punch_orbitals", "default_ionization_potential", "name"});
        std::string path;
        r.get("path", path);
        if (path.empty()) throw ConfigError("config.molecule.path is required");
        c.molecule = std::filesystem::path(path);
        if (c.molecule.is_relative() && !base_dir.empty()) c.molecule = base_dir / c.molecule;
        std::string format = "auto";
        r.get("format", format);
        if (format == "auto")
            c.format = ingest::format_from_path(c.molecule);
        else if (format == "native")
            c.format = ingest::MoleculeFormat::native;
        else if (format == "punch")
            c.format = ingest::MoleculeFormat::punch;
        else
            throw ConfigError("config.molecule.format must be auto, native or punch");
        c.punch.default_ionization_potential =
            r.positive("default_ionization_potential", c.punch.default_ionization_potential);
        r.get("name", c.punch.name);
        if (r.has("punch_orbitals")) {
            const json& list = r.at("punch_orbitals");
            if (!list.is_array()) throw ConfigError("config.molecule.punch_orbitals must be a list");
            for (std::size_t k = 0; k < list.size(); ++k) {
                detail::Reader o(list[k], "config.molecule.punch_orbitals[" + std::to_string(k) + "]");
                o.allow({"vec_index", "label", "ionization_potential", "degeneracy"});
                ingest::OrbitalSelection sel;
                if (!o.has("vec_index")) throw ConfigError(o.path("vec_index") + " is required");
                sel.vec_index = o.count("vec_index", 1);
                o.get("label", sel.label);
                sel.ionization_potential = o.positive("ionization_potential", c.punch.default_ionization_potential);
                sel.degeneracy = static_cast<int>(o.count("degeneracy", 1));
                if (sel.label.empty()) sel.label = "MO" + std::to_string(sel.vec_index);
                c.punch.orbitals.push_back(sel);
            }
        }
    }

    {
        json laser = top.has("laser") ? top.at("laser") : json::object();
        detail::Reader r(laser, "config.laser");
        r.allow({"intensity_w_cm2", "e0_au", "wavelength_nm", "omega_au", "vector_potential"});
        if (r.has("e0_au") && r.has("intensity_w_cm2"))
            throw ConfigError("config.laser: give intensity_w_cm2 or e0_au, not both");
        if (r.has("omega_au") && r.has("wavelength_nm"))
            throw ConfigError("config.laser: give wavelength_nm or omega_au, not both");
        if (r.has("e0_au")) {
            r.get("e0_au", c.e0);
            if (!(c.e0 >= 0.0) || !std::isfinite(c.e0)) throw ConfigError("config.laser.e0_au must be >= 0");
        } else {
            double intensity = 5e14;
            r.get("intensity_w_cm2", intensity);
            if (!(intensity >= 0.0) || !std::isfinite(intensity))
                throw ConfigError("config.laser.intensity_w_cm2 must be >= 0");
            c.e0 = units::field_from_intensity(intensity);
        }
        c.omega = r.has("omega_au") ? r.positive("omega_au", 0.057)
                                    : units::omega_from_wavelength(r.positive("wavelength_nm", 800.0));
        std::string conv = "turn_on_zero";
        r.get("vector_potential", conv);
        if (conv == "turn_on_zero")
            c.convention = VectorPotentialConvention::turn_on_zero;
        else if (conv == "pure_cosine")
            c.convention = VectorPotentialConvention::pure_cosine;
        else
            throw ConfigError("config.laser.vector_potential must be turn_on_zero or pure_cosine");
    }

    if (top.has("drive_axes")) c.drive_axes = parse_axes(top.at("drive_axes"), "config.drive_axes");
    if (top.has("orbitals")) {
        const json& o = top.at("orbitals");
        c.orbitals.clear();
        if (o.is_string()) {
            c.orbitals.push_back(o.get<std::string>());
        } else if (o.is_array()) {
            for (const auto& e : o) {
                if (!e.is_string()) throw ConfigError("config.orbitals: labels must be strings");
                c.orbitals.push_back(e.get<std::string>());
            }
        } else {
            throw ConfigError("config.orbitals must be a label or a list of labels");
        }
        if (c.orbitals.empty()) throw ConfigError("config.orbitals is empty");
    }
    if (top.has("orbital_sum")) {
        std::string s;
        top.get("orbital_sum", s);
        if (s == "coherent")
            c.orbital_sum = OrbitalSum::coherent;
        else if (s == "incoherent")
            c.orbital_sum = OrbitalSum::incoherent;
        else
            throw ConfigError("config.orbital_sum must be coherent or incoherent");
    }
    if (top.has("channels")) {
        std::string s;
        top.get("channels", s);
        if (s == "all")
            c.channels = ChannelFilter::all;
        else if (s == "direct")
            c.channels = ChannelFilter::direct;
        else if (s == "transfer")
            c.channels = ChannelFilter::transfer;
        else
            throw ConfigError("config.channels must be all, direct or transfer");
    }
    top.get("quick", c.quick);
    c.grids = c.quick ? quick_grids() : GridConfig{};
    if (top.has("grids")) {
        detail::Reader r(top.at("grids"), "config.grids");
        r.allow({"samples_per_cycle", "cycles", "discard_cycles", "tau_nodes", "panel_order", "tau_min",
                 "tau_max_cycles", "epsilon"});
        auto& g = c.grids;
        g.samples_per_cycle = r.count("samples_per_cycle", g.samples_per_cycle, 8);
        g.cycles = r.count("cycles", g.cycles, 1);
        g.discard_cycles = r.count("discard_cycles", g.discard_cycles, 0);
        g.panel_order = r.count("panel_order", g.panel_order, 1);
        g.tau_nodes = r.count("tau_nodes", g.tau_nodes, g.panel_order);
        g.tau_min = r.positive("tau_min", g.tau_min);
        g.tau_max_cycles = r.positive("tau_max_cycles", g.tau_max_cycles);
        g.epsilon = r.positive("epsilon", g.epsilon);
        if (g.tau_nodes % g.panel_order != 0)
            throw ConfigError("config.grids.tau_nodes must be a multiple of panel_order");
    }
    if (c.grids.discard_cycles < c.grids.tau_max_cycles)
        std::fprintf(stderr, "warning: discard_cycles (%zu) < tau_max_cycles (%g): early samples see the turn-on\n",
                     c.grids.discard_cycles, c.grids.tau_max_cycles);

    if (top.has("analysis")) {
        detail::Reader r(top.at("analysis"), "config.analysis");
        r.allow({"spectra", "scans", "gabor", "polarization", "correlation", "window", "odd_only", "envelope_depth",
                 "shoulder_width", "envelope_min_order", "zero_depth", "zero_window", "scan_order_step",
                 "scan_order_max", "scan_fixed", "gabor_width", "gabor_time_stride", "gabor_max_order",
                 "gabor_all_components"});
        auto& a = c.analysis;
        r.get("spectra", a.spectra);
        r.get("scans", a.scans);
        r.get("gabor", a.gabor);
        r.get("polarization", a.polarization);
        r.get("correlation", a.correlation);
        if (r.has("window")) {
            std::string w;
            r.get("window", w);
            if (w == "hann")
                a.window = WindowKind::hann;
            else if (w == "rectangular")
                a.window = WindowKind::rectangular;
            else
                throw ConfigError("config.analysis.window must be hann or rectangular");
        }
        if (r.has("odd_only")) {
            bool v = true;
            r.get("odd_only", v);
            a.odd_only = v;
        }
        a.envelope_depth = r.positive("envelope_depth", a.envelope_depth);
        a.shoulder_width = static_cast<int>(r.count("shoulder_width", a.shoulder_width));
        a.envelope_min_order = static_cast<int>(r.count("envelope_min_order", a.envelope_min_order));
        a.zero_depth = r.positive("zero_depth", a.zero_depth);
        a.zero_window = r.positive("zero_window", a.zero_window);
        a.scan_order_step = r.positive("scan_order_step", a.scan_order_step);
        a.scan_order_max = r.positive("scan_order_max", a.scan_order_max);
        r.get("scan_fixed", a.scan_fixed);
        r.get("gabor_width", a.gabor_width);
        if (a.gabor_width < 0.0) throw ConfigError("config.analysis.gabor_width must be >= 0");
        a.gabor_time_stride = r.count("gabor_time_stride", a.gabor_time_stride);
        a.gabor_max_order = r.positive("gabor_max_order", a.gabor_max_order);
        r.get("gabor_all_components", a.gabor_all_components);
    }
    if (top.has("convergence")) {
        detail::Reader r(top.at("convergence"), "config.convergence");
        r.allow({"enabled", "tolerance", "min_order"});
        r.get("enabled", c.convergence.enabled);
        c.convergence.tolerance = r.positive("tolerance", c.convergence.tolerance);
        c.convergence.min_order = static_cast<int>(r.count("min_order", c.convergence.min_order));
    }
    if (top.has("output_dir")) {
        std::string out;
        top.get("output_dir", out);
        if (out.empty()) throw ConfigError("config.output_dir is empty");
        c.output_dir = out;
        if (c.output_dir.is_relative() && !base_dir.empty()) c.output_dir = base_dir / c.output_dir;
    }
    return c;
}

inline json read_config_file(const std::filesystem::path& path) {
    const std::string text = ingest::read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = ingest::detail::line_column(text, e.byte);
        throw ConfigError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": malformed config JSON");
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": malformed config JSON: " + e.what());
    }
}

inline LaserField make_field(const RunConfig& c, int axis) {
    Vec3 a = Vec3::Zero();
    a[axis] = 1.0;
    LaserField f;
    f.amplitude = c.e0;
    f.omega = c.omega;
    f.axis = a;
    f.convention = c.convention;
    f.validate();
    return f;
}

}  // namespace hhg::app
