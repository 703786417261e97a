// Minimal use of the library: load a fixture, print the field diagnostics,
// the RME zeros along the drive axis and a few harmonic intensities.
//
//   quickstart [molecule.json] [cycles]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "hhg/field.hpp"
#include "hhg/ingest.hpp"
#include "hhg/lewenstein.hpp"
#include "hhg/rme_scan.hpp"
#include "hhg/spectrum.hpp"

int main(int argc, char** argv) {
    const std::string path = argc > 1 ? argv[1] : "data/fixtures/ring.json";
    const int cycles = argc > 2 ? std::atoi(argv[2]) : 2;
    try {
        const auto mol = hhg::ingest::load_molecule(path);
        const auto homo = mol.orbitals_labelled("HOMO");
        if (homo.empty()) {
            std::fprintf(stderr, "%s has no orbital labelled HOMO\n", path.c_str());
            return 1;
        }

        // 5e14 W/cm^2 at 800 nm, polarized along x
        const auto field = hhg::LaserField::from_lab_units(5e14, 800.0, hhg::Vec3::UnitX());
        const auto d = hhg::diagnostics(field, mol, homo.front());
        std::printf("%s: Up = %.4f, alpha0 = %.3f, Q = %.3f, cutoff order %.2f\n", mol.name().c_str(),
                    d.ponderomotive_energy, d.quiver_radius, d.q_parameter, d.cutoff_order);

        const auto scan = hhg::scan_rme(mol, homo, field, 0);
        std::printf("RME zeros of d_x along Pi_x:");
        for (const auto& z : hhg::find_rme_zeros(scan, 0)) std::printf(" %.2f", z.order);
        std::printf("\n");

        const auto tau = hhg::TauGrid::for_field(field, 256);
        const auto grid = hhg::TimeGrid::for_field(field, 256, cycles, 2);
        const auto series = hhg::dipole_time_series(mol, homo, field, grid, tau);
        const auto spec = hhg::spectrum_from_dipole(series);
        for (int n = 11; n <= 81; n += 10)
            std::printf("H%-3d %.3e\n", n, hhg::harmonic_peak(spec, 0, n));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
