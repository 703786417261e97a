#pragma once

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hhg/constants.hpp"
#include "hhg/error.hpp"
#include "hhg/molecule.hpp"

/// GAMESS punch-file subset: $DATA (C1 geometry and basis) and $VEC.
/// Format notes live in docs/native_format.md.
namespace hhg::ingest {

struct PunchGroup {
    std::string name;              // upper case, without '$'
    std::vector<std::string> lines;  // body lines between the header and $END
    std::size_t first_line = 0;    // 1-based line number of lines[0]
    std::string header_rest;       // text after the group name on the header line
};

struct PunchDocument {
    PunchGroup data;
    PunchGroup vec;
    bool coordinates_in_bohr = false;  // from $CONTRL UNITS=BOHR
    std::string source;                // path, for messages only
    std::vector<std::string> warnings;
};

struct OrbitalSelection {
    std::size_t vec_index = 1;  // 1-based position in $VEC
    std::string label;
    double ionization_potential = 0.0;
    int degeneracy = 1;
};

struct PunchOptions {
    std::vector<OrbitalSelection> orbitals;  // empty: every $VEC orbital, named MO<k>
    double default_ionization_potential = 0.5;
    std::string name;
    std::function<void(const std::string&)> warn;  // null: stderr
};

namespace detail {

inline std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> tokens(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        const std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

// Fortran real: accepts D/d exponents; the whole token must be consumed.
inline std::optional<double> parse_real(std::string_view tok) {
    tok = trim(tok);
    if (tok.empty() || tok.size() > 64) return std::nullopt;
    std::string buf(tok);
    for (auto& ch : buf)
        if (ch == 'D' || ch == 'd') ch = 'E';
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::optional<long> parse_int(std::string_view tok) {
    tok = trim(tok);
    if (tok.empty() || tok.size() > 18) return std::nullopt;
    std::string buf(tok);
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(buf.c_str(), &end, 10);
    if (end != buf.c_str() + buf.size() || errno == ERANGE) return std::nullopt;
    return v;
}

inline std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string line(text.substr(start, nl - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        if (nl == text.size()) break;
        start = nl + 1;
    }
    return lines;
}

inline bool is_end(std::string_view line) { return upper(trim(line)).rfind("$END", 0) == 0; }

// Cartesian components of each GAMESS shell type, in GAMESS order.
inline std::vector<CartesianPowers> shell_components(char type) {
    switch (type) {
        case 'S': return {{0, 0, 0}};
        case 'P': return {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        case 'D': return {{2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
        case 'F':
            return {{3, 0, 0}, {0, 3, 0}, {0, 0, 3}, {2, 1, 0}, {2, 0, 1},
                    {1, 2, 0}, {0, 2, 1}, {1, 0, 2}, {0, 1, 2}, {1, 1, 1}};
        default: return {};
    }
}

}  // namespace detail

/// Splits punch text into groups. $DATA and $VEC are kept; $CONTRL is read
/// for UNITS; everything else is skipped with a warning.
inline PunchDocument split_punch(std::string_view text, std::string source = {}) {
    using namespace detail;
    PunchDocument doc;
    doc.source = std::move(source);
    const auto lines = split_lines(text);
    bool have_data = false, have_vec = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string_view t = trim(lines[i]);
        if (t.empty() || t[0] != '$') continue;
        const auto toks = tokens(t);
        const std::string name = upper(toks[0].substr(1));
        if (name == "END") continue;
        PunchGroup group;
        group.name = name;
        group.first_line = i + 2;
        group.header_rest = std::string(trim(t.substr(toks[0].size())));
        const std::string rest_upper = upper(group.header_rest);
        const bool inline_end = rest_upper.find("$END") != std::string::npos;
        if (!inline_end) {
            std::size_t j = i + 1;
            for (; j < lines.size() && !is_end(lines[j]); ++j) group.lines.push_back(lines[j]);
            if (j == lines.size()) throw StructuralError("unterminated $" + name + " group (no $END)");
            i = j;
        }
        if (name == "DATA") {
            if (have_data) throw StructuralError("more than one $DATA group");
            doc.data = std::move(group);
            have_data = true;
        } else if (name == "VEC") {
            if (have_vec) throw StructuralError("more than one $VEC group");
            doc.vec = std::move(group);
            have_vec = true;
        } else if (name == "CONTRL") {
            std::string all = rest_upper;
            for (const auto& l : group.lines) all += " " + upper(l);
            if (all.find("UNITS=BOHR") != std::string::npos) doc.coordinates_in_bohr = true;
        } else {
            doc.warnings.push_back("skipping unsupported group $" + name);
        }
    }
    if (!have_data) throw StructuralError("missing $DATA group");
    if (!have_vec) throw StructuralError("missing $VEC group");
    return doc;
}

/// One $VEC line: I2 orbital index, I3 line index, up to five E15.8 fields.
struct VecLine {
    int orbital = 0;
    int line = 0;
    std::vector<double> values;
};

inline VecLine parse_vec_line(std::string_view text, std::size_t line_number) {
    using namespace detail;
    VecLine out;
    if (text.size() < 5) throw ParseError("$VEC line shorter than its I2,I3 prefix", line_number, 1);
    const auto orb = parse_int(text.substr(0, 2));
    if (!orb) throw ParseError("bad orbital index field (I2)", line_number, 1);
    const auto ln = parse_int(text.substr(2, 3));
    if (!ln) throw ParseError("bad line index field (I3)", line_number, 3);
    out.orbital = static_cast<int>(*orb);
    out.line = static_cast<int>(*ln);
    std::size_t pos = 5;
    while (pos < text.size()) {
        const std::string_view field = text.substr(pos, 15);
        if (trim(field).empty()) {
            if (!trim(text.substr(pos)).empty())
                throw ParseError("blank E15.8 field followed by data", line_number, pos + 1);
            break;
        }
        if (out.values.size() == 5) throw ParseError("more than five fields on a $VEC line", line_number, pos + 1);
        const auto v = parse_real(field);
        if (!v) throw ParseError("malformed E15.8 field '" + std::string(trim(field)) + "'", line_number, pos + 1);
        out.values.push_back(*v);
        pos += 15;
    }
    return out;
}

/// Inverse of parse_vec_line for a line of up to five values.
inline std::string format_vec_line(int orbital, int line, const std::vector<double>& values) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%2d%3d", orbital % 100, line % 1000);
    std::string out(buf);
    for (double v : values) {
        std::snprintf(buf, sizeof buf, "%15.8E", v);
        out += buf;
    }
    return out;
}

/// Orbitals of a $VEC group in order; each must hold `basis_size` values.
inline std::vector<std::vector<double>> parse_vec_group(const PunchGroup& vec, std::size_t basis_size) {
    std::vector<std::vector<double>> orbitals;
    int current = -1;
    int expected_line = 0;
    for (std::size_t k = 0; k < vec.lines.size(); ++k) {
        const std::string& text = vec.lines[k];
        if (detail::trim(text).empty()) continue;
        const std::size_t line_number = vec.first_line + k;
        const VecLine v = parse_vec_line(text, line_number);
        if (orbitals.empty() || v.orbital != current) {
            if (!orbitals.empty() && orbitals.back().size() != basis_size)
                throw StructuralError("$VEC orbital " + std::to_string(orbitals.size()) + " has " +
                                      std::to_string(orbitals.back().size()) + " coefficients, basis has " +
                                      std::to_string(basis_size));
            if (orbitals.size() > 100000) throw StructuralError("$VEC holds too many orbitals");
            orbitals.emplace_back();
            current = v.orbital;
            expected_line = 1;
        }
        if (v.line % 1000 != expected_line % 1000)
            throw ParseError("unexpected $VEC line index " + std::to_string(v.line), line_number, 3);
        ++expected_line;
        auto& dst = orbitals.back();
        dst.insert(dst.end(), v.values.begin(), v.values.end());
    }
    if (orbitals.empty()) throw StructuralError("$VEC group holds no coefficients");
    if (orbitals.back().size() != basis_size)
        throw StructuralError("$VEC orbital " + std::to_string(orbitals.size()) + " has " +
                              std::to_string(orbitals.back().size()) + " coefficients, basis has " +
                              std::to_string(basis_size));
    return orbitals;
}

/// Centers with Cartesian shells from a C1 $DATA group.
inline std::vector<AtomicCenter> parse_data_group(const PunchGroup& data, bool bohr,
                                                  std::vector<std::string>* warnings = nullptr) {
    using namespace detail;
    const auto& L = data.lines;
    const auto where = [&](std::size_t k) { return data.first_line + k; };
    if (L.size() < 2) throw StructuralError("$DATA group needs a title and a symmetry line");
    const std::string group = upper(trim(L[1]));
    if (group.rfind("C1", 0) != 0)
        throw StructuralError("$DATA symmetry '" + std::string(trim(L[1])) + "' is not supported (C1 only)");
    const double scale = bohr ? 1.0 : units::bohr_per_angstrom;
    std::vector<AtomicCenter> centers;
    std::size_t k = 2;
    while (k < L.size()) {
        if (trim(L[k]).empty()) {
            ++k;
            continue;
        }
        const auto atom = tokens(L[k]);
        if (atom.size() < 5) throw ParseError("atom line needs NAME CHARGE X Y Z", where(k), 1);
        AtomicCenter c;
        std::string name(atom[0]);
        std::string element;
        for (char ch : name)
            if (std::isalpha(static_cast<unsigned char>(ch))) element += ch;
        c.element = element.empty() ? name : element;
        if (!parse_real(atom[1])) throw ParseError("bad nuclear charge", where(k), 1);
        for (int d = 0; d < 3; ++d) {
            const auto x = parse_real(atom[2 + d]);
            if (!x) throw ParseError("bad coordinate '" + std::string(atom[2 + d]) + "'", where(k), 1);
            c.position[d] = *x * scale;
        }
        ++k;
        // shells until a blank line
        while (k < L.size() && !trim(L[k]).empty()) {
            const auto head = tokens(L[k]);
            if (head.size() < 2 || head[0].size() != 1)
                throw ParseError("shell header needs TYPE NPRIM", where(k), 1);
            const char type = static_cast<char>(std::toupper(static_cast<unsigned char>(head[0][0])));
            const auto nprim = parse_int(head[1]);
            if (!nprim || *nprim < 1 || *nprim > 100)
                throw ParseError("bad primitive count", where(k), 1);
            if (type != 'L' && shell_components(type).empty())
                throw ParseError(std::string("unsupported shell type '") + type + "'", where(k), 1);
            std::vector<GaussianPrimitive> prim_a, prim_b;
            ++k;
            for (long p = 0; p < *nprim; ++p, ++k) {
                if (k >= L.size()) throw StructuralError("$DATA ends inside a shell");
                const auto t = tokens(L[k]);
                const std::size_t need = type == 'L' ? 4 : 3;
                if (t.size() < need) throw ParseError("primitive line too short", where(k), 1);
                const auto alpha = parse_real(t[1]);
                const auto c1 = parse_real(t[2]);
                if (!alpha || !c1) throw ParseError("bad primitive value", where(k), 1);
                if (!(*alpha > 0.0)) throw ParseError("exponent must be positive", where(k), 1);
                prim_a.push_back({*alpha, *c1});
                if (type == 'L') {
                    const auto c2 = parse_real(t[3]);
                    if (!c2) throw ParseError("bad P coefficient of L shell", where(k), 1);
                    prim_b.push_back({*alpha, *c2});
                }
            }
            auto add = [&](char t, const std::vector<GaussianPrimitive>& prims) {
                for (const auto& powers : shell_components(t))
                    c.shells.push_back(ContractedShell::normalized(powers, prims));
            };
            if (type == 'L') {
                add('S', prim_a);
                add('P', prim_b);
            } else {
                add(type, prim_a);
            }
        }
        if (c.shells.empty() && warnings) warnings->push_back("atom '" + name + "' has no basis functions");
        centers.push_back(std::move(c));
    }
    if (centers.empty()) throw StructuralError("$DATA group holds no atoms");
    return centers;
}

inline Molecule parse_punch(const PunchDocument& doc, const PunchOptions& options = {}) {
    auto warn = [&](const std::string& w) {
        if (options.warn)
            options.warn(w);
        else
            std::cerr << "warning: " << w << '\n';
    };
    try {
        for (const auto& w : doc.warnings) warn(w);
        std::vector<std::string> warnings;
        auto centers = parse_data_group(doc.data, doc.coordinates_in_bohr, &warnings);
        for (const auto& w : warnings) warn(w);
        std::size_t basis = 0;
        for (const auto& c : centers) basis += c.shells.size();
        const auto vectors = parse_vec_group(doc.vec, basis);

        std::vector<MolecularOrbital> orbitals;
        if (options.orbitals.empty()) {
            for (std::size_t i = 0; i < vectors.size(); ++i)
                orbitals.push_back({"MO" + std::to_string(i + 1), options.default_ionization_potential, 1, vectors[i]});
        } else {
            for (const auto& sel : options.orbitals) {
                if (sel.vec_index < 1 || sel.vec_index > vectors.size())
                    throw ConfigError("orbital selection " + std::to_string(sel.vec_index) + " outside $VEC (" +
                                      std::to_string(vectors.size()) + " orbitals)");
                orbitals.push_back({sel.label.empty() ? "MO" + std::to_string(sel.vec_index) : sel.label,
                                    sel.ionization_potential > 0.0 ? sel.ionization_potential
                                                                   : options.default_ionization_potential,
                                    sel.degeneracy, vectors[sel.vec_index - 1]});
            }
        }
        return Molecule(std::move(centers), std::move(orbitals), Vec3::Zero(), options.name);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(std::string("punch input rejected: ") + e.what(), 0, 0);
    }
}

/// split_punch + parse_punch, with every failure reported as an hhg::Error.
inline Molecule parse_punch_text(std::string_view text, const PunchOptions& options = {}) {
    try {
        return parse_punch(split_punch(text), options);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(std::string("punch input rejected: ") + e.what(), 0, 0);
    }
}

}  // namespace hhg::ingest
