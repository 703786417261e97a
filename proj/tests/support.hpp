#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "hhg/field.hpp"
#include "hhg/ingest.hpp"
#include "hhg/molecule.hpp"

namespace hhg::test {

inline std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(HHG_DATA_DIR) / name; }

inline Molecule fixture(const std::string& name) { return ingest::load_molecule(data_path("fixtures/" + name)); }

// Normalized s Gaussian exp(-alpha r^2) on one center, labelled HOMO.
inline Molecule s_atom(const Vec3& at = Vec3::Zero(), double alpha = 0.3, double ip = 0.2782) {
    AtomicCenter c{at, "X", {ContractedShell::normalized({0, 0, 0}, {{alpha, 1.0}})}};
    return Molecule({c}, {{"HOMO", ip, 1, {1.0}}}, Vec3::Zero(), "atom");
}

// Bonding pair of s Gaussians at +-half_bond along x.
inline Molecule s_dimer(double half_bond, double alpha = 0.5, double ip = 0.5, double sign = 1.0) {
    const auto shell = ContractedShell::normalized({0, 0, 0}, {{alpha, 1.0}});
    std::vector<AtomicCenter> c{{Vec3(-half_bond, 0, 0), "X", {shell}}, {Vec3(half_bond, 0, 0), "X", {shell}}};
    Molecule m(c, {{"HOMO", ip, 1, {1.0, sign}}}, Vec3::Zero(), "dimer");
    const double n = std::sqrt(orbital_norm(m, 0));
    return Molecule(c, {{"HOMO", ip, 1, {1.0 / n, sign / n}}}, Vec3::Zero(), "dimer");
}

inline LaserField standard_field(const Vec3& axis = Vec3::UnitX()) { return LaserField(0.119362, 0.056954, axis); }

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240611);
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }
inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

}  // namespace hhg::test
