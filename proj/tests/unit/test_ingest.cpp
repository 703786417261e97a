#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hhg/ingest.hpp"
#include "fuzz.hpp"
#include "support.hpp"

using namespace hhg;
using namespace hhg::ingest;

namespace {

PunchOptions ring_selection() {
    PunchOptions o;
    o.orbitals = {{1, "HOMO-1", 0.3209, 1}, {2, "HOMO", 0.3192, 1}};
    o.name = "ring";
    o.warn = [](const std::string&) {};
    return o;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(Native, FixtureRoundTripsExactly) {
    for (const char* name : {"ring.json", "bowl.json", "fullerene.json"}) {
        const std::string text = read_text_file(test::data_path(std::string("fixtures/") + name));
        const Molecule m = parse_native(text);
        const std::string again = write_native(m);
        EXPECT_TRUE(parse_native(again) == m) << name;
        EXPECT_EQ(write_native(parse_native(again)), again) << name;
    }
}

TEST(Native, MalformedJsonReportsLineAndColumn) {
    try {
        parse_native("{\n  \"format\": \"hhg-molecule\",\n  \"version\": 1,,\n}");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_GT(e.column(), 1u);
    }
}

TEST(Native, SchemaViolationsAreCollected) {
    const std::string doc = R"({"format":"other","version":2,"units":"angstrom","centers":[],"orbitals":[],"extra":1})";
    try {
        parse_native(doc);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_GE(e.violations().size(), 4u);
    }
    EXPECT_THROW(parse_native("[1,2,3]"), ValidationError);
}

TEST(Native, RejectsCoefficientCountMismatch) {
    std::string text = write_native(test::s_dimer(1.0));
    const auto at = text.find("\"coefficients\": [");
    ASSERT_NE(at, std::string::npos);
    text.insert(text.find('[', at) + 1, "0.5, ");
    EXPECT_THROW(parse_native(text), ValidationError);
}

TEST(Punch, RingGoldenMatchesNativeFixture) {
    const Molecule native = test::fixture("ring.json");
    const Molecule punch = load_molecule(test::data_path("fixtures/ring.dat"), ring_selection());
    ASSERT_EQ(punch.centers().size(), native.centers().size());
    ASSERT_EQ(punch.basis_size(), native.basis_size());
    for (std::size_t i = 0; i < native.centers().size(); ++i) {
        const auto& a = punch.centers()[i];
        const auto& b = native.centers()[i];
        EXPECT_LT((a.position - b.position).norm(), 1e-9);
        ASSERT_EQ(a.shells.size(), b.shells.size());
        for (std::size_t k = 0; k < a.shells.size(); ++k) {
            EXPECT_EQ(a.shells[k].powers(), b.shells[k].powers());
            EXPECT_NEAR(a.shells[k].normalization(), b.shells[k].normalization(), 1e-12);
            ASSERT_EQ(a.shells[k].primitives().size(), b.shells[k].primitives().size());
            for (std::size_t p = 0; p < a.shells[k].primitives().size(); ++p) {
                EXPECT_DOUBLE_EQ(a.shells[k].primitives()[p].exponent, b.shells[k].primitives()[p].exponent);
                EXPECT_NEAR(a.shells[k].primitives()[p].coefficient, b.shells[k].primitives()[p].coefficient,
                            1e-12 * std::abs(b.shells[k].primitives()[p].coefficient));
            }
        }
    }
    for (std::size_t o = 0; o < native.orbitals().size(); ++o) {
        EXPECT_EQ(punch.orbital(o).label, native.orbital(o).label);
        EXPECT_EQ(punch.orbital(o).ionization_potential, native.orbital(o).ionization_potential);
        for (std::size_t k = 0; k < native.basis_size(); ++k)
            EXPECT_NEAR(punch.orbital(o).coefficients[k], native.orbital(o).coefficients[k], 5e-9);
    }
}

TEST(Punch, VecLinesRoundTripThroughTheFormatter) {
    const std::string text = read_text_file(test::data_path("fixtures/ring.dat"));
    const auto lines = lines_of(text);
    bool in_vec = false;
    int checked = 0;
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const std::string t = lines[k];
        if (t.find("$VEC") != std::string::npos) {
            in_vec = true;
            continue;
        }
        if (!in_vec) continue;
        if (t.find("$END") != std::string::npos) break;
        const VecLine v = parse_vec_line(t, k + 1);
        EXPECT_EQ(format_vec_line(v.orbital, v.line, v.values), t) << "line " << k + 1;
        ++checked;
    }
    EXPECT_EQ(checked, 2 * 52);
}

TEST(Punch, VecLineGolden) {
    EXPECT_EQ(format_vec_line(3, 12, {1.0, -0.5, 2.5e-7}), " 3 12 1.00000000E+00-5.00000000E-01 2.50000000E-07");
    const auto v = parse_vec_line(" 1  1-1.23456789E-01 5.00000000E+00", 7);
    EXPECT_EQ(v.orbital, 1);
    EXPECT_EQ(v.line, 1);
    ASSERT_EQ(v.values.size(), 2u);
    EXPECT_DOUBLE_EQ(v.values[0], -0.123456789);
    EXPECT_DOUBLE_EQ(v.values[1], 5.0);
    // fixed-width fields need no separating blanks
    EXPECT_EQ(parse_vec_line(" 2  3-1.00000000E+00-2.00000000E+00", 1).values.size(), 2u);
}

TEST(Punch, MalformedVecFieldGivesLineAndColumn) {
    std::string text = read_text_file(test::data_path("fixtures/h_minimal.dat"));
    text.replace(text.find("1.00000000E+00"), 14, "1.0000000XE+00");
    try {
        parse_punch_text(text);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 10u);
        EXPECT_EQ(e.column(), 6u);
    }
}

TEST(Punch, MinimalHydrogen) {
    std::vector<std::string> warnings;
    PunchOptions o;
    o.warn = [&](const std::string& w) { warnings.push_back(w); };
    const auto m = load_molecule(test::data_path("fixtures/h_minimal.dat"), o);
    ASSERT_EQ(m.centers().size(), 1u);
    EXPECT_EQ(m.centers()[0].element, "H");
    EXPECT_EQ(m.basis_size(), 1u);
    ASSERT_EQ(m.orbitals().size(), 1u);
    EXPECT_EQ(m.orbital(0).label, "MO1");
    EXPECT_EQ(m.orbital(0).ionization_potential, 0.5);
    EXPECT_EQ(m.centers()[0].position, Vec3::Zero());  // the 1.0 is the nuclear charge
    EXPECT_NEAR(orbital_norm(m, 0), 1.0, 1e-12);
    EXPECT_EQ(m.name(), "h_minimal");
}

TEST(Punch, LShellExpandsToSThenP) {
    const std::string text =
        " $CONTRL UNITS=BOHR $END\n $DATA\nt\nC1\nC 6.0 0.0 0.0 1.5\n   L   1\n  1  0.5  1.0  1.0\n\n $END\n"
        " $VEC\n 1  1 1.00000000E+00 0.00000000E+00 0.00000000E+00 0.00000000E+00\n $END\n";
    const auto m = parse_punch_text(text);
    ASSERT_EQ(m.basis_size(), 4u);
    const auto& sh = m.centers()[0].shells;
    EXPECT_EQ(sh[0].powers(), (CartesianPowers{0, 0, 0}));
    EXPECT_EQ(sh[1].powers(), (CartesianPowers{1, 0, 0}));
    EXPECT_EQ(sh[2].powers(), (CartesianPowers{0, 1, 0}));
    EXPECT_EQ(sh[3].powers(), (CartesianPowers{0, 0, 1}));
    EXPECT_DOUBLE_EQ(m.centers()[0].position.z(), 1.5);
}

TEST(Punch, DShellUsesGamessComponentOrder) {
    const std::string text =
        " $DATA\nt\nC1\nC 6.0 0.0 0.0 0.0\n   D   1\n  1  0.8  1.0\n\n $END\n"
        " $VEC\n 1  1 1.00000000E+00 0.00000000E+00 0.00000000E+00 0.00000000E+00 0.00000000E+00\n"
        " 1  2 0.00000000E+00\n $END\n";
    PunchOptions o;
    o.warn = [](const std::string&) {};
    const auto m = parse_punch_text(text, o);
    const auto& sh = m.centers()[0].shells;
    const std::vector<CartesianPowers> expect{{2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
    ASSERT_EQ(sh.size(), expect.size());
    for (std::size_t k = 0; k < sh.size(); ++k) EXPECT_EQ(sh[k].powers(), expect[k]);
}

TEST(Punch, StructuralProblems) {
    EXPECT_THROW(parse_punch_text(" $VEC\n 1  1 1.0E+00\n $END\n"), StructuralError);
    EXPECT_THROW(parse_punch_text(" $DATA\nt\nC1\n"), StructuralError);
    EXPECT_THROW(parse_punch_text(" $DATA\nt\nD2H\nH 1 0 0 0\n   S 1\n 1 1.0 1.0\n\n $END\n $VEC\n 1  1 1.0E+00\n $END\n"),
                 StructuralError);
    PunchOptions o;
    o.orbitals = {{5, "X", 0.4, 1}};
    o.warn = [](const std::string&) {};
    EXPECT_THROW(load_molecule(test::data_path("fixtures/h_minimal.dat"), o), ConfigError);
}

TEST(Fuzz, TenThousandMutatedInputsNeverEscapeTheErrorHierarchy) {
    const auto t = test::fuzz_parsers(10000);
    EXPECT_EQ(t.escaped, 0);
    EXPECT_EQ(t.accepted + t.rejected, 10000);
    EXPECT_GT(t.rejected, 5000);
}
