// Builds the shipped C20 fixtures (ring, bowl, fullerene) and the punch
// golden files.
//
// No Hartree-Fock code is available here, so the orbitals come from an
// extended-Hueckel calculation on valence AOs that live inside the 6-311G
// carbon basis (least-squares fits of Slater 2s/2p functions onto the three
// SP shells). Ionization potentials and static dipoles are the tabulated
// reference values; only the coefficient vectors are model output.
//
// usage: make_fixtures <output-dir>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "hhg/constants.hpp"
#include "hhg/ingest/native.hpp"
#include "hhg/ingest/punch.hpp"
#include "hhg/molecule.hpp"

namespace fs = std::filesystem;
using hhg::AtomicCenter;
using hhg::CartesianPowers;
using hhg::ContractedShell;
using hhg::GaussianPrimitive;
using hhg::Vec3;

namespace {

constexpr double hartree_ev = 27.211386245988;
constexpr double slater_zeta = 1.625;  // carbon 2s/2p, Slater's rules
constexpr double h_2s = -21.4 / hartree_ev;
constexpr double h_2p = -11.4 / hartree_ev;
constexpr double wolfsberg_helmholz = 1.75;

struct BasisShell {
    char type;  // S or L
    std::vector<double> exponents;
    std::vector<double> coef_s;
    std::vector<double> coef_p;
};

// 6-311G, carbon
const std::vector<BasisShell>& carbon_6311g() {
    static const std::vector<BasisShell> basis = {
        {'S',
         {4563.240, 682.0240, 154.9730, 44.45530, 13.02900, 1.827730},
         {0.00196665, 0.0152306, 0.0761269, 0.2608010, 0.6164620, 0.2210060},
         {}},
        {'L', {20.96420, 4.803310, 1.459330}, {0.1146600, 0.9199990, -0.00303068}, {0.0402487, 0.2375940, 0.8158540}},
        {'L', {0.4834560}, {1.0}, {1.0}},
        {'L', {0.1455850}, {1.0}, {1.0}},
    };
    return basis;
}

std::vector<GaussianPrimitive> prims(const std::vector<double>& a, const std::vector<double>& c) {
    std::vector<GaussianPrimitive> out;
    for (std::size_t k = 0; k < a.size(); ++k) out.push_back({a[k], c[k]});
    return out;
}

// Cartesian functions of one carbon: 1s, then (s, px, py, pz) for each L shell.
std::vector<ContractedShell> carbon_shells() {
    std::vector<ContractedShell> out;
    for (const auto& sh : carbon_6311g()) {
        out.push_back(ContractedShell::normalized({0, 0, 0}, prims(sh.exponents, sh.coef_s)));
        if (sh.type == 'L') {
            out.push_back(ContractedShell::normalized({1, 0, 0}, prims(sh.exponents, sh.coef_p)));
            out.push_back(ContractedShell::normalized({0, 1, 0}, prims(sh.exponents, sh.coef_p)));
            out.push_back(ContractedShell::normalized({0, 0, 1}, prims(sh.exponents, sh.coef_p)));
        }
    }
    return out;
}

constexpr int functions_per_carbon = 13;
// indices of the valence functions inside a carbon block
constexpr int s_index[3] = {1, 5, 9};
constexpr int p_index[3] = {2, 6, 10};  // +0,+1,+2 for x,y,z

// Radial fit of r^n exp(-zeta r) (n = 1 for 2s, x exp(-zeta r) for 2p) onto
// the valence shells; returns coefficients over the three shells.
Eigen::Vector3d fit_slater(const std::vector<ContractedShell>& shells, bool p_type) {
    const int* idx = p_type ? p_index : s_index;
    const Vec3 origin = Vec3::Zero();
    Eigen::Matrix3d S;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) S(a, b) = hhg::shell_overlap(shells[idx[a]], origin, shells[idx[b]], origin);
    // radial integrals, Simpson on [0, 40]
    const int n = 40000;
    const double h = 40.0 / n;
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    double norm = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double r = k * h;
        const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        const double sto = p_type ? std::exp(-slater_zeta * r) : r * std::exp(-slater_zeta * r);
        // angular factor: 4 pi for s, 4 pi / 3 for x*x
        const double jac = p_type ? (4.0 * hhg::units::pi / 3.0) * r * r * r * r : 4.0 * hhg::units::pi * r * r;
        norm += w * jac * sto * sto;
        for (int a = 0; a < 3; ++a) {
            const Vec3 u(r, 0.0, 0.0);
            double g = shells[idx[a]].value(u);
            if (p_type) g = r > 0.0 ? g / r : 0.0;
            b[a] += w * jac * g * sto;
        }
    }
    norm *= h / 3.0;
    b *= h / 3.0 / std::sqrt(norm);
    Eigen::Vector3d c = S.ldlt().solve(b);
    return c / std::sqrt(c.dot(S * c));
}

struct Geometry {
    std::string name;
    std::vector<Vec3> positions;
};

Geometry ring() {
    // D10h polyyne-like ring, alternating arcs, atom 0 on +x, radius 7.8
    const double radius = 7.8;
    const double delta = 0.9 * hhg::units::pi / 180.0;
    const double step = 2.0 * hhg::units::pi / 20.0;
    Geometry g{"ring", {}};
    double theta = 0.0;
    for (int k = 0; k < 20; ++k) {
        g.positions.emplace_back(radius * std::cos(theta), radius * std::sin(theta), 0.0);
        theta += (k % 2 == 0) ? step - delta : step + delta;
    }
    return g;
}

Geometry fullerene() {
    // dodecahedron in the orientation with the three coordinate mirror planes,
    // stretched along z (D2h) so the HOMO is non-degenerate
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    std::vector<Vec3> v;
    for (int sx : {-1, 1})
        for (int sy : {-1, 1})
            for (int sz : {-1, 1}) v.emplace_back(sx, sy, sz);
    for (int s1 : {-1, 1})
        for (int s2 : {-1, 1}) {
            v.emplace_back(0.0, s1 / phi, s2 * phi);
            v.emplace_back(s1 / phi, s2 * phi, 0.0);
            v.emplace_back(s1 * phi, 0.0, s2 / phi);
        }
    const Vec3 stretch(1.0, 0.985, 1.07);
    for (auto& p : v) p = p.cwiseProduct(stretch);
    double mean = 0.0;
    for (const auto& p : v) mean += p.norm();
    mean /= v.size();
    for (auto& p : v) p *= 3.8 / mean;
    return {"fullerene", v};
}

Geometry bowl() {
    // corannulene-like cap of C60: hub pentagon, spokes and rim, C5v about z
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    std::vector<Vec3> c60;
    auto add_even_perms = [&](double a, double b, double c) {
        for (int sa : {-1, 1})
            for (int sb : {-1, 1})
                for (int sc : {-1, 1}) {
                    const double x = sa * a, y = sb * b, z = sc * c;
                    for (const Vec3& p : {Vec3(x, y, z), Vec3(y, z, x), Vec3(z, x, y)}) {
                        bool dup = false;
                        for (const auto& q : c60) dup = dup || (q - p).norm() < 1e-9;
                        if (!dup) c60.push_back(p);
                    }
                }
    };
    add_even_perms(0.0, 1.0, 3.0 * phi);
    add_even_perms(1.0, 2.0 + phi, 2.0 * phi);
    add_even_perms(phi, 2.0, phi * phi * phi);
    if (c60.size() != 60) throw std::runtime_error("C60 construction failed");
    // pentagon around the vertex with the largest z among those near (0,1,3phi)
    const Vec3 p0(0.0, 1.0, 3.0 * phi);
    std::vector<Vec3> nearest;
    for (const auto& q : c60)
        if ((q - p0).norm() < 2.01) nearest.push_back(q);  // edge length 2
    // the pentagon through p0: its two ring neighbours have a common pentagon centre
    Vec3 axis = Vec3::Zero();
    {
        // centre of the pentagonal face containing p0: vertices within the face are
        // those at distance <= 2 phi (face diagonal) from p0 on the same face
        std::vector<Vec3> face{p0};
        for (const auto& q : c60) {
            if ((q - p0).norm() < 1e-9) continue;
            const double d = (q - p0).norm();
            if (std::abs(d - 2.0) < 1e-6 || std::abs(d - 2.0 * phi) < 1e-6) face.push_back(q);
        }
        // keep the five that are coplanar with a pentagon: test all subsets via centroid norm
        // (the pentagon face of C60 is the face whose centroid lies farthest out)
        double best = -1.0;
        for (std::size_t a = 1; a < face.size(); ++a)
            for (std::size_t b = a + 1; b < face.size(); ++b)
                for (std::size_t c = b + 1; c < face.size(); ++c)
                    for (std::size_t d = c + 1; d < face.size(); ++d) {
                        const Vec3 q[5] = {face[0], face[a], face[b], face[c], face[d]};
                        Vec3 cen = Vec3::Zero();
                        for (const auto& x : q) cen += x;
                        cen /= 5.0;
                        bool regular = true;
                        for (const auto& x : q) regular = regular && std::abs((x - cen).norm() - 2.0 / (2.0 * std::sin(hhg::units::pi / 5.0))) < 1e-6;
                        if (regular && cen.norm() > best) {
                            best = cen.norm();
                            axis = cen.normalized();
                        }
                    }
    }
    (void)nearest;
    // rotate axis onto +z
    const Vec3 z = Vec3::UnitZ();
    const Eigen::Matrix3d R = Eigen::Quaterniond::FromTwoVectors(axis, z).toRotationMatrix();
    std::vector<Vec3> rotated;
    for (const auto& q : c60) rotated.push_back(R * q);
    std::sort(rotated.begin(), rotated.end(), [](const Vec3& a, const Vec3& b) { return a.z() > b.z(); });
    rotated.resize(20);
    // put a hub atom on the xz plane so the y -> -y mirror is a symmetry
    double rim_r = 0.0;
    for (const auto& p : rotated) rim_r = std::max(rim_r, std::hypot(p.x(), p.y()));
    const Vec3 rim_atom = rotated.front();
    const double ang = -std::atan2(rim_atom.y(), rim_atom.x());
    const Eigen::Matrix3d Rz = Eigen::AngleAxisd(ang, z).toRotationMatrix();
    for (auto& p : rotated) p = Rz * p;
    // C-C edge 2 -> 1.42 angstrom, rim radius 6.1 bohr in-plane
    const double to_bohr = 1.42 * hhg::units::bohr_per_angstrom / 2.0;
    for (auto& p : rotated) p *= to_bohr;
    rim_r *= to_bohr;
    const double xy_scale = 6.1 / rim_r;
    Vec3 centroid = Vec3::Zero();
    for (auto& p : rotated) {
        p.x() *= xy_scale;
        p.y() *= xy_scale;
        centroid += p;
    }
    centroid /= 20.0;
    for (auto& p : rotated) p -= centroid;
    // the widest pair sits on the rim (one z layer): trim the in-plane scale to R_max = 11.8
    double rmax = 0.0;
    for (const auto& p : rotated)
        for (const auto& q : rotated) rmax = std::max(rmax, (p - q).norm());
    for (auto& p : rotated) {
        p.x() *= 11.8 / rmax;
        p.y() *= 11.8 / rmax;
    }
    return {"bowl", rotated};
}

// A linear map on the molecular basis induced by a coordinate sign flip
// (mask bit d set: x_d -> -x_d). Returns nullopt-like empty matrix when the
// geometry is not invariant.
Eigen::MatrixXd reflection_operator(const std::vector<Vec3>& pos, const std::vector<ContractedShell>& shells,
                                    int mask) {
    const int n = static_cast<int>(pos.size());
    const int nb = n * functions_per_carbon;
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(nb, nb);
    for (int i = 0; i < n; ++i) {
        Vec3 img = pos[i];
        for (int d = 0; d < 3; ++d)
            if (mask & (1 << d)) img[d] = -img[d];
        int j = -1;
        for (int k = 0; k < n; ++k)
            if ((pos[k] - img).norm() < 1e-8) j = k;
        if (j < 0) return {};
        for (int f = 0; f < functions_per_carbon; ++f) {
            double sign = 1.0;
            for (int d = 0; d < 3; ++d)
                if ((mask & (1 << d)) && shells[f].powers()[d] % 2) sign = -sign;
            op(j * functions_per_carbon + f, i * functions_per_carbon + f) = sign;
        }
    }
    return op;
}

struct Level {
    double energy;
    Eigen::VectorXd coefficients;  // over the 13 n basis functions
};

struct EhtResult {
    std::vector<Level> levels;  // ascending
    Eigen::MatrixXd overlap;    // molecular basis
};

EhtResult extended_hueckel(const Geometry& geom, const std::vector<ContractedShell>& shells) {
    const int n = static_cast<int>(geom.positions.size());
    const Eigen::Vector3d cs = fit_slater(shells, false);
    const Eigen::Vector3d cp = fit_slater(shells, true);
    // AO -> basis transformation T (nb x 4n)
    const int nb = n * functions_per_carbon;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(nb, 4 * n);
    for (int i = 0; i < n; ++i) {
        const int base = i * functions_per_carbon;
        for (int k = 0; k < 3; ++k) {
            T(base + s_index[k], 4 * i) = cs[k];
            for (int d = 0; d < 3; ++d) T(base + p_index[k] + d, 4 * i + 1 + d) = cp[k];
        }
    }
    Eigen::MatrixXd Sb(nb, nb);
    for (int a = 0; a < nb; ++a)
        for (int b = a; b < nb; ++b) {
            Sb(a, b) = hhg::shell_overlap(shells[a % functions_per_carbon], geom.positions[a / functions_per_carbon],
                                          shells[b % functions_per_carbon], geom.positions[b / functions_per_carbon]);
            Sb(b, a) = Sb(a, b);
        }
    const Eigen::MatrixXd S = T.transpose() * Sb * T;
    Eigen::MatrixXd H(4 * n, 4 * n);
    for (int a = 0; a < 4 * n; ++a) {
        const double ha = a % 4 == 0 ? h_2s : h_2p;
        for (int b = 0; b < 4 * n; ++b) {
            const double hb = b % 4 == 0 ? h_2s : h_2p;
            H(a, b) = a == b ? ha : (a / 4 == b / 4 ? 0.0 : wolfsberg_helmholz * S(a, b) * 0.5 * (ha + hb));
        }
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(H, S);
    if (solver.info() != Eigen::Success) throw std::runtime_error("EHT eigensolver failed");
    EhtResult r;
    r.overlap = Sb;
    for (int k = 0; k < 4 * n; ++k) r.levels.push_back({solver.eigenvalues()[k], T * solver.eigenvectors().col(k)});
    return r;
}

// Projects c onto the parity (+-1) it mostly has under each operator.
Eigen::VectorXd symmetrize(Eigen::VectorXd c, const std::vector<Eigen::MatrixXd>& ops, const Eigen::MatrixXd& S,
                           std::string& report) {
    for (const auto& op : ops) {
        const double chi = c.dot(S * (op * c));
        const double sign = chi >= 0.0 ? 1.0 : -1.0;
        c = 0.5 * (c + sign * (op * c));
        report += (sign > 0 ? "+" : "-");
        char buf[32];
        std::snprintf(buf, sizeof buf, "(%.6f) ", std::abs(chi));
        report += buf;
    }
    return c / std::sqrt(c.dot(S * c));
}

struct OrbitalSpec {
    std::string label;
    double ip;
};

struct MoleculeSpec {
    Geometry geometry;
    Vec3 dipole;
    std::vector<int> symmetry_masks;  // coordinate reflections to enforce
    OrbitalSpec homo, homo1;
    int homo_degeneracy;
};

hhg::Molecule build(const MoleculeSpec& spec, const std::vector<ContractedShell>& shells) {
    const auto& geom = spec.geometry;
    const auto eht = extended_hueckel(geom, shells);
    const int occupied = static_cast<int>(geom.positions.size()) * 2;  // 4 valence e- per carbon
    std::cerr << geom.name << ": EHT levels around the gap (eV)\n";
    for (int k = occupied - 8; k < occupied + 3; ++k)
        std::fprintf(stderr, "  %3d %s %10.5f\n", k + 1, k < occupied ? "occ " : "virt", eht.levels[k].energy * hartree_ev);

    std::vector<Eigen::MatrixXd> ops;
    for (int mask : spec.symmetry_masks) {
        auto op = reflection_operator(geom.positions, shells, mask);
        if (op.size() == 0) throw std::runtime_error(geom.name + ": geometry lacks requested symmetry");
        ops.push_back(std::move(op));
    }

    // group occupied levels into degenerate sets from the top
    std::vector<std::vector<int>> sets;
    for (int k = occupied - 1; k >= 0 && sets.size() < 2;) {
        std::vector<int> set{k};
        while (k - 1 >= 0 && std::abs(eht.levels[k - 1].energy - eht.levels[k].energy) < 1e-7) set.push_back(--k);
        --k;
        sets.push_back(set);
    }
    std::vector<hhg::MolecularOrbital> orbitals;
    const OrbitalSpec* names[2] = {&spec.homo1, &spec.homo};
    for (int s = 1; s >= 0; --s) {
        const auto& set = sets[s];
        const OrbitalSpec& os = s == 0 ? spec.homo : spec.homo1;
        (void)names;
        for (int k : set) {
            std::string report;
            Eigen::VectorXd c = eht.levels[k].coefficients;
            if (set.size() == 1) c = symmetrize(c, ops, eht.overlap, report);
            std::fprintf(stderr, "  %s <- level %d (degeneracy %zu) parities %s\n", os.label.c_str(), k + 1,
                         set.size(), report.c_str());
            // sign convention: largest coefficient positive
            Eigen::Index imax;
            c.cwiseAbs().maxCoeff(&imax);
            if (c[imax] < 0) c = -c;
            std::vector<double> coef(c.data(), c.data() + c.size());
            orbitals.push_back({os.label, os.ip, static_cast<int>(set.size()), coef});
        }
    }
    std::vector<AtomicCenter> centers;
    for (const auto& p : geom.positions) centers.push_back({p, "C", shells});
    return hhg::Molecule(std::move(centers), std::move(orbitals), spec.dipole, "C20 " + geom.name);
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
    std::cerr << "wrote " << path.string() << "\n";
}

// Punch rendering of a molecule built from the 6-311G carbon basis.
std::string to_punch(const hhg::Molecule& m, const std::string& title) {
    std::string out;
    char buf[160];
    out += " $CONTRL SCFTYP=RHF RUNTYP=ENERGY $END\n";
    out += " $DATA\n" + title + "\nC1\n";
    for (const auto& c : m.centers()) {
        const Vec3 a = c.position / hhg::units::bohr_per_angstrom;
        std::snprintf(buf, sizeof buf, "C           6.0%20.10f%20.10f%20.10f\n", a.x(), a.y(), a.z());
        out += buf;
        for (const auto& sh : carbon_6311g()) {
            std::snprintf(buf, sizeof buf, "   %c %3zu\n", sh.type, sh.exponents.size());
            out += buf;
            for (std::size_t k = 0; k < sh.exponents.size(); ++k) {
                if (sh.type == 'L')
                    std::snprintf(buf, sizeof buf, "%3zu %16.7f %16.9f %16.9f\n", k + 1, sh.exponents[k],
                                  sh.coef_s[k], sh.coef_p[k]);
                else
                    std::snprintf(buf, sizeof buf, "%3zu %16.7f %16.9f\n", k + 1, sh.exponents[k], sh.coef_s[k]);
                out += buf;
            }
        }
        out += "\n";
    }
    out += " $END\n";
    out += "--- ORBITALS (HOMO-1, HOMO) ---\n";
    out += " $VEC\n";
    int index = 0;
    for (const auto& orb : m.orbitals()) {
        ++index;
        const auto& c = orb.coefficients;
        for (std::size_t start = 0, line = 1; start < c.size(); start += 5, ++line) {
            std::vector<double> chunk(c.begin() + start, c.begin() + std::min(c.size(), start + 5));
            out += hhg::ingest::format_vec_line(index, static_cast<int>(line), chunk) + "\n";
        }
    }
    out += " $END\n";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixtures <output-dir>\n";
        return 2;
    }
    const fs::path dir = argv[1];
    fs::create_directories(dir);
    const auto shells = carbon_shells();

    const std::vector<MoleculeSpec> specs = {
        {ring(), Vec3::Zero(), {4, 7}, {"HOMO", 0.3192}, {"HOMO-1", 0.3209}, 1},
        {bowl(), Vec3(0.0, 0.0, 0.2048), {2}, {"HOMO", 0.3568}, {"HOMO-1", 0.3658}, 2},
        {fullerene(), Vec3::Zero(), {1, 2, 4}, {"HOMO", 0.2782}, {"HOMO-1", 0.3293}, 1},
    };
    for (const auto& spec : specs) {
        const auto mol = build(spec, shells);
        const double rmax = hhg::max_internuclear_distance(mol);
        std::fprintf(stderr, "  R_max = %.4f bohr\n", rmax);
        for (std::size_t i = 0; i < mol.orbitals().size(); ++i)
            std::fprintf(stderr, "  norm(%s) = %.12f\n", mol.orbitals()[i].label.c_str(), hhg::orbital_norm(mol, i));
        write_file(dir / (spec.geometry.name + ".json"), hhg::ingest::write_native(mol));
        if (spec.geometry.name == "ring") write_file(dir / "ring.dat", to_punch(mol, "C20 ring, 6-311G"));
    }

    // smallest meaningful punch document: one H atom, one s primitive
    write_file(dir / "h_minimal.dat",
               " $DATA\nH atom\nC1\nH     1.0     0.0  0.0  0.0\n   S   1\n  1  1.0  1.0\n\n $END\n"
               " $VEC\n 1  1 1.00000000E+00\n $END\n");
    return 0;
}
