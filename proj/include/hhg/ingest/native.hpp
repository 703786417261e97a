#pragma once

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hhg/error.hpp"
#include "hhg/molecule.hpp"

/// Native molecule format: a JSON document, bohr only. See docs/native_format.md.
namespace hhg::ingest {

inline constexpr std::string_view native_format_tag = "hhg-molecule";
inline constexpr int native_format_version = 1;

namespace detail {

using nlohmann::json;

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

class Validator {
  public:
    void fail(std::string msg) { errors_.push_back(std::move(msg)); }
    bool ok() const { return errors_.empty(); }
    std::vector<std::string> take() { return std::move(errors_); }

    void known_keys(const json& obj, std::initializer_list<std::string_view> keys, const std::string& where) {
        for (const auto& [k, v] : obj.items()) {
            bool found = false;
            for (auto key : keys) found = found || key == k;
            if (!found) fail(where + ": unknown key '" + k + "'");
        }
    }

    const json* member(const json& obj, const char* key, const std::string& where, bool required = true) {
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) fail(where + ": missing '" + key + "'");
            return nullptr;
        }
        return &*it;
    }

    bool number(const json* v, const std::string& what, double& out) {
        if (v == nullptr) return false;
        if (!v->is_number()) {
            fail(what + " must be a number");
            return false;
        }
        out = v->get<double>();
        if (!std::isfinite(out)) {
            fail(what + " must be finite");
            return false;
        }
        return true;
    }

    bool integer(const json* v, const std::string& what, long long& out) {
        if (v == nullptr) return false;
        if (!v->is_number_integer()) {
            fail(what + " must be an integer");
            return false;
        }
        out = v->get<long long>();
        return true;
    }

    bool vec3(const json* v, const std::string& what, Vec3& out) {
        if (v == nullptr) return false;
        if (!v->is_array() || v->size() != 3) {
            fail(what + " must be an array of 3 numbers");
            return false;
        }
        bool good = true;
        for (int d = 0; d < 3; ++d) good = number(&(*v)[d], what + "[" + std::to_string(d) + "]", out[d]) && good;
        return good;
    }

  private:
    std::vector<std::string> errors_;
};

inline std::string fmt_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    // keep reals recognisable as reals
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

inline std::string quote(std::string_view s) { return json(std::string(s)).dump(); }

}  // namespace detail

/// Parses a native molecule document. Every violation found is reported in a
/// single ValidationError; malformed JSON raises ParseError with line/column.
inline Molecule parse_native(std::string_view text) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        auto [line, col] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(std::string("malformed JSON: ") + e.what(), line, col);
    } catch (const json::exception& e) {
        // number overflow carries no offset; locate the quoted token instead
        const std::string msg = e.what();
        std::size_t at = 0;
        if (const auto q = msg.find("parsing '"); q != std::string::npos) {
            const auto token = msg.substr(q + 9, msg.find('\'', q + 9) - q - 9);
            if (const auto hit = text.find(token); hit != std::string_view::npos) at = hit;
        }
        auto [line, col] = detail::line_column(text, at);
        throw ParseError("malformed JSON: " + msg, line, col);
    }

    detail::Validator v;
    if (!doc.is_object()) throw ValidationError({"document must be a JSON object"});
    v.known_keys(doc, {"format", "version", "name", "units", "static_dipole_debye", "centers", "orbitals"},
                 "document");

    if (const auto* f = v.member(doc, "format", "document")) {
        if (!f->is_string() || f->get<std::string>() != native_format_tag)
            v.fail("document: 'format' must be \"" + std::string(native_format_tag) + "\"");
    }
    long long version = 0;
    if (v.integer(v.member(doc, "version", "document"), "document: 'version'", version) &&
        version != native_format_version)
        v.fail("document: unsupported version " + std::to_string(version));
    std::string name;
    if (const auto* n = v.member(doc, "name", "document", false)) {
        if (n->is_string())
            name = n->get<std::string>();
        else
            v.fail("document: 'name' must be a string");
    }
    if (const auto* u = v.member(doc, "units", "document", false)) {
        if (!u->is_string() || u->get<std::string>() != "bohr") v.fail("document: 'units' must be \"bohr\"");
    }
    Vec3 dipole = Vec3::Zero();
    if (const auto* d = v.member(doc, "static_dipole_debye", "document", false))
        v.vec3(d, "document: 'static_dipole_debye'", dipole);

    std::vector<AtomicCenter> centers;
    std::size_t basis_size = 0;
    const auto* jc = v.member(doc, "centers", "document");
    if (jc != nullptr && !jc->is_array()) v.fail("document: 'centers' must be an array");
    if (jc != nullptr && jc->is_array()) {
        if (jc->empty()) v.fail("document: 'centers' must not be empty");
        for (std::size_t i = 0; i < jc->size(); ++i) {
            const json& c = (*jc)[i];
            const std::string where = "centers[" + std::to_string(i) + "]";
            if (!c.is_object()) {
                v.fail(where + " must be an object");
                continue;
            }
            v.known_keys(c, {"element", "position", "shells"}, where);
            AtomicCenter center;
            if (const auto* el = v.member(c, "element", where)) {
                if (el->is_string())
                    center.element = el->get<std::string>();
                else
                    v.fail(where + ": 'element' must be a string");
            }
            v.vec3(v.member(c, "position", where), where + ": 'position'", center.position);
            const auto* js = v.member(c, "shells", where);
            if (js != nullptr && !js->is_array()) v.fail(where + ": 'shells' must be an array");
            if (js != nullptr && js->is_array()) {
                for (std::size_t s = 0; s < js->size(); ++s) {
                    const json& sh = (*js)[s];
                    const std::string sw = where + ".shells[" + std::to_string(s) + "]";
                    if (!sh.is_object()) {
                        v.fail(sw + " must be an object");
                        continue;
                    }
                    v.known_keys(sh, {"powers", "primitives", "normalization"}, sw);
                    CartesianPowers powers;
                    bool good = true;
                    if (const auto* p = v.member(sh, "powers", sw)) {
                        if (!p->is_array() || p->size() != 3) {
                            v.fail(sw + ": 'powers' must be an array of 3 integers");
                            good = false;
                        } else {
                            long long pw[3] = {0, 0, 0};
                            for (int d = 0; d < 3; ++d) {
                                if (!v.integer(&(*p)[d], sw + ": 'powers'", pw[d]) || pw[d] < 0 || pw[d] > 16) {
                                    if ((*p)[d].is_number_integer()) v.fail(sw + ": powers must be in [0, 16]");
                                    good = false;
                                }
                            }
                            powers = {static_cast<int>(pw[0]), static_cast<int>(pw[1]), static_cast<int>(pw[2])};
                        }
                    } else {
                        good = false;
                    }
                    std::vector<GaussianPrimitive> prims;
                    if (const auto* jp = v.member(sh, "primitives", sw)) {
                        if (!jp->is_array() || jp->empty()) {
                            v.fail(sw + ": 'primitives' must be a non-empty array");
                            good = false;
                        } else {
                            for (std::size_t k = 0; k < jp->size(); ++k) {
                                const json& pr = (*jp)[k];
                                const std::string pw = sw + ".primitives[" + std::to_string(k) + "]";
                                if (!pr.is_array() || pr.size() != 2) {
                                    v.fail(pw + " must be [exponent, coefficient]");
                                    good = false;
                                    continue;
                                }
                                GaussianPrimitive g;
                                if (v.number(&pr[0], pw + ": exponent", g.exponent) && !(g.exponent > 0.0)) {
                                    v.fail(pw + ": exponent must be positive");
                                    good = false;
                                }
                                if (!v.number(&pr[1], pw + ": coefficient", g.coefficient)) good = false;
                                prims.push_back(g);
                            }
                        }
                    } else {
                        good = false;
                    }
                    double norm = 0.0;
                    const auto* jn = v.member(sh, "normalization", sw, false);
                    if (jn != nullptr && v.number(jn, sw + ": 'normalization'", norm) && !(norm > 0.0)) {
                        v.fail(sw + ": normalization must be positive");
                        good = false;
                    }
                    ++basis_size;
                    if (!good || !v.ok()) continue;
                    try {
                        center.shells.push_back(jn != nullptr ? ContractedShell(powers, prims, norm)
                                                              : ContractedShell::normalized(powers, prims));
                    } catch (const ValidationError& e) {
                        for (const auto& msg : e.violations()) v.fail(sw + ": " + msg);
                    }
                }
            }
            centers.push_back(std::move(center));
        }
    }

    std::vector<MolecularOrbital> orbitals;
    const auto* jo = v.member(doc, "orbitals", "document");
    if (jo != nullptr && !jo->is_array()) v.fail("document: 'orbitals' must be an array");
    if (jo != nullptr && jo->is_array()) {
        for (std::size_t i = 0; i < jo->size(); ++i) {
            const json& o = (*jo)[i];
            const std::string where = "orbitals[" + std::to_string(i) + "]";
            if (!o.is_object()) {
                v.fail(where + " must be an object");
                continue;
            }
            v.known_keys(o, {"label", "ionization_potential", "degeneracy", "coefficients"}, where);
            MolecularOrbital orb;
            if (const auto* l = v.member(o, "label", where)) {
                if (l->is_string())
                    orb.label = l->get<std::string>();
                else
                    v.fail(where + ": 'label' must be a string");
            }
            if (v.number(v.member(o, "ionization_potential", where), where + ": 'ionization_potential'",
                         orb.ionization_potential) &&
                !(orb.ionization_potential > 0.0))
                v.fail(where + ": ionization potential must be positive");
            long long deg = 1;
            if (const auto* d = v.member(o, "degeneracy", where, false)) {
                if (v.integer(d, where + ": 'degeneracy'", deg) && (deg < 1 || deg > 1000))
                    v.fail(where + ": degeneracy must be a positive integer");
            }
            orb.degeneracy = static_cast<int>(std::clamp<long long>(deg, 0, 1000));
            if (const auto* jcoef = v.member(o, "coefficients", where)) {
                if (!jcoef->is_array()) {
                    v.fail(where + ": 'coefficients' must be an array");
                } else {
                    orb.coefficients.reserve(jcoef->size());
                    for (std::size_t k = 0; k < jcoef->size(); ++k) {
                        double c = 0.0;
                        if (v.number(&(*jcoef)[k], where + ": coefficients[" + std::to_string(k) + "]", c))
                            orb.coefficients.push_back(c);
                    }
                    if (jcoef->size() != basis_size)
                        v.fail(where + ": has " + std::to_string(jcoef->size()) + " coefficients, basis has " +
                               std::to_string(basis_size));
                }
            }
            orbitals.push_back(std::move(orb));
        }
    }

    if (!v.ok()) throw ValidationError(v.take());
    return Molecule(std::move(centers), std::move(orbitals), dipole, std::move(name));
}

/// Deterministic writer: fixed key order, reals with 17 significant digits.
/// Shells are written with their literal coefficients and normalization.
inline std::string write_native(const Molecule& m) {
    using detail::fmt_real;
    using detail::quote;
    std::ostringstream os;
    auto vec = [&](const Vec3& x) {
        return "[" + fmt_real(x.x()) + ", " + fmt_real(x.y()) + ", " + fmt_real(x.z()) + "]";
    };
    os << "{\n";
    os << "  \"format\": " << quote(native_format_tag) << ",\n";
    os << "  \"version\": " << native_format_version << ",\n";
    os << "  \"name\": " << quote(m.name()) << ",\n";
    os << "  \"units\": \"bohr\",\n";
    os << "  \"static_dipole_debye\": " << vec(m.static_dipole()) << ",\n";
    os << "  \"centers\": [\n";
    for (std::size_t i = 0; i < m.centers().size(); ++i) {
        const auto& c = m.centers()[i];
        os << "    {\n      \"element\": " << quote(c.element) << ",\n";
        os << "      \"position\": " << vec(c.position) << ",\n";
        os << "      \"shells\": [\n";
        for (std::size_t s = 0; s < c.shells.size(); ++s) {
            const auto& sh = c.shells[s];
            os << "        {\"powers\": [" << sh.powers().a << ", " << sh.powers().b << ", " << sh.powers().c
               << "], \"normalization\": " << fmt_real(sh.normalization()) << ", \"primitives\": [";
            for (std::size_t k = 0; k < sh.primitives().size(); ++k) {
                const auto& p = sh.primitives()[k];
                os << (k ? ", " : "") << "[" << fmt_real(p.exponent) << ", " << fmt_real(p.coefficient) << "]";
            }
            os << "]}" << (s + 1 < c.shells.size() ? "," : "") << "\n";
        }
        os << "      ]\n    }" << (i + 1 < m.centers().size() ? "," : "") << "\n";
    }
    os << "  ],\n";
    os << "  \"orbitals\": [\n";
    for (std::size_t i = 0; i < m.orbitals().size(); ++i) {
        const auto& o = m.orbitals()[i];
        os << "    {\n      \"label\": " << quote(o.label) << ",\n";
        os << "      \"ionization_potential\": " << fmt_real(o.ionization_potential) << ",\n";
        os << "      \"degeneracy\": " << o.degeneracy << ",\n";
        os << "      \"coefficients\": [";
        for (std::size_t k = 0; k < o.coefficients.size(); ++k) {
            if (k % 4 == 0) os << "\n        ";
            os << fmt_real(o.coefficients[k]) << (k + 1 < o.coefficients.size() ? ", " : "");
        }
        os << "\n      ]\n    }" << (i + 1 < m.orbitals().size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
    return os.str();
}

}  // namespace hhg::ingest
