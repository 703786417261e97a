// hhg: command-line front end.
//
//   hhg diagnose CONFIG   Up, quiver radius, Q and cutoff per orbital
//   hhg run CONFIG        dipole, spectra, scans, Gabor maps, manifest
//   hhg scan CONFIG       RME scans and zeros only
//   hhg gabor CONFIG      dipole and time-frequency maps only
//
// Flags override config keys; HHG_WORKERS sets the thread count.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "hhg/app/config.hpp"
#include "hhg/app/run.hpp"

namespace {

using hhg::app::json;

struct Overrides {
    std::string molecule;
    std::string axes;
    std::vector<std::string> orbitals;
    std::string out;
    std::string channels;
    std::string sum;
    bool quick = false;
    bool converge = false;
    std::optional<std::size_t> tau_nodes;
    std::optional<std::size_t> samples_per_cycle;
    std::optional<std::size_t> cycles;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--molecule", molecule, "molecule file (.json native, .dat/.pun punch)");
        cmd->add_option("--axes", axes, "drive axes, e.g. x or xy");
        cmd->add_option("--orbitals", orbitals, "orbital labels");
        cmd->add_option("-o,--out", out, "output directory");
        cmd->add_option("--channels", channels, "all, direct or transfer");
        cmd->add_option("--sum", sum, "coherent or incoherent orbital sum");
        cmd->add_flag("--quick", quick, "reduced grids");
        cmd->add_flag("--converge", converge, "run the convergence gate");
        cmd->add_option("--tau-nodes", tau_nodes, "return-time quadrature nodes");
        cmd->add_option("--samples-per-cycle", samples_per_cycle, "time samples per optical cycle");
        cmd->add_option("--cycles", cycles, "retained optical cycles");
    }

    void apply(json& doc) const {
        if (!molecule.empty()) {
            if (doc.contains("molecule") && doc["molecule"].is_object())
                doc["molecule"]["path"] = std::filesystem::absolute(molecule).string();
            else
                doc["molecule"] = std::filesystem::absolute(molecule).string();
        }
        if (!axes.empty()) doc["drive_axes"] = axes;
        if (!orbitals.empty()) doc["orbitals"] = orbitals;
        if (!out.empty()) doc["output_dir"] = std::filesystem::absolute(out).string();
        if (!channels.empty()) doc["channels"] = channels;
        if (!sum.empty()) doc["orbital_sum"] = sum;
        if (quick) doc["quick"] = true;
        if (converge) doc["convergence"]["enabled"] = true;
        if (tau_nodes) doc["grids"]["tau_nodes"] = *tau_nodes;
        if (samples_per_cycle) doc["grids"]["samples_per_cycle"] = *samples_per_cycle;
        if (cycles) doc["grids"]["cycles"] = *cycles;
    }
};

void print_diagnostics(const hhg::app::RunConfig& c) {
    const auto mol = hhg::app::load_configured_molecule(c);
    const auto rows = hhg::app::diagnostics_table(c, mol);
    std::printf("molecule %s: %zu centers, R_max = %.4f bohr\n", mol.name().c_str(), mol.centers().size(),
                hhg::max_internuclear_distance(mol));
    std::printf("%-10s %8s %4s %9s %9s %7s %9s\n", "orbital", "Ip", "deg", "Up", "alpha0", "Q", "cutoff");
    for (const auto& r : rows) {
        std::printf("%-10s %8.4f %4d %9.4f %9.4f %7.3f %9.2f\n", r.label.c_str(), r.ip, r.degeneracy,
                    r.d.ponderomotive_energy, r.d.quiver_radius, r.d.q_parameter, r.d.cutoff_order);
        if (r.d.q_parameter > 0.5)
            std::fprintf(stderr, "warning: Q = %.3f > 0.5 for %s, the length-gauge treatment is doubtful\n",
                         r.d.q_parameter, r.label.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-center Lewenstein HHG simulator"};
    app.require_subcommand(1);
    std::string config_path;
    Overrides ov;
    struct Entry {
        const char* name;
        const char* help;
        hhg::app::Verb verb;
    };
    const Entry verbs[] = {
        {"diagnose", "print Up, quiver radius, Q and cutoff orders", hhg::app::Verb::diagnose},
        {"run", "full run: dipole, spectra, scans, Gabor maps", hhg::app::Verb::run},
        {"scan", "RME scans along the three momentum axes and their zeros", hhg::app::Verb::scan},
        {"gabor", "dipole and Gabor time-frequency maps", hhg::app::Verb::gabor},
    };
    std::optional<hhg::app::Verb> chosen;
    for (const auto& v : verbs) {
        auto* cmd = app.add_subcommand(v.name, v.help);
        cmd->add_option("config", config_path, "JSON run configuration")->required();
        ov.add_to(cmd);
        cmd->callback([&chosen, verb = v.verb] { chosen = verb; });
    }
    CLI11_PARSE(app, argc, argv);

    hhg::app::RunConfig cfg;
    try {
        json doc = hhg::app::read_config_file(config_path);
        ov.apply(doc);
        cfg = hhg::app::parse_run_config(doc, std::filesystem::path(config_path).parent_path());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return hhg::app::exit_code_for(e) == hhg::app::exit_failure ? hhg::app::exit_config
                                                                    : hhg::app::exit_code_for(e);
    }

    if (*chosen == hhg::app::Verb::diagnose) {
        try {
            print_diagnostics(cfg);
            return hhg::app::exit_ok;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return hhg::app::exit_code_for(e);
        }
    }
    try {
        return hhg::app::execute(cfg, *chosen, config_path);
    } catch (const std::exception& e) {
        // output directory could not be prepared
        std::fprintf(stderr, "error: %s\n", e.what());
        return hhg::app::exit_code_for(e);
    }
}
