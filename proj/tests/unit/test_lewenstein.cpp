#include <gtest/gtest.h>

#include <cmath>

#include "hhg/lewenstein.hpp"
#include "atom_reference.hpp"
#include "support.hpp"

using namespace hhg;

namespace {

double max_abs(const std::vector<CVec3>& d) {
    double m = 0.0;
    for (const auto& v : d) m = std::max(m, v.norm());
    return m;
}

}  // namespace

TEST(Atomic, MultiCenterEngineReducesToTextbookReference) {
    const auto atom = test::s_atom(Vec3::Zero(), 0.3, 0.2782);
    const auto f = test::standard_field();
    const auto tau = TauGrid::for_field(f, 256);
    const DipoleEngine engine(atom, {0}, f, tau);
    const test::AtomReference ref(f.amplitude, f.omega, 0.2782, 0.3);
    const auto grid = TimeGrid::for_field(f, 64, 2, 2);
    std::vector<double> got, want;
    double scale = 0.0;
    for (std::size_t n = 0; n < grid.count; ++n) {
        const CVec3 d = engine.dipole_at_time(grid[n]);
        EXPECT_EQ(d.y(), 0.0);
        EXPECT_EQ(d.z(), 0.0);
        got.push_back(d.x().real());
        want.push_back(ref.dipole(grid[n], tau.rule.nodes, tau.rule.weights, tau.epsilon));
        scale = std::max(scale, std::abs(want.back()));
    }
    ASSERT_GT(scale, 0.0);
    for (std::size_t n = 0; n < got.size(); ++n) EXPECT_LE(std::abs(got[n] - want[n]), 1e-10 * scale) << n;
}

TEST(Action, SaddleMomentumIsStationary) {
    const auto f = test::standard_field(Vec3(0.6, 0.0, 0.8));
    const Vec3 Ri(1.0, -2.0, 0.5), Rj(-0.7, 0.3, 2.0);
    for (double t : {250.0, 300.0}) {
        for (double tau : {5.0, 40.0, 120.0}) {
            const Vec3 p = saddle_momentum(f, t, tau, Ri, Rj);
            const auto s0 = modified_action(f, 0.4, t, tau, Ri, Rj, p);
            EXPECT_LT(s0.gradient_norm, 1e-10 * (1.0 + p.norm() * tau));
            for (int d = 0; d < 3; ++d) {
                Vec3 h = Vec3::Zero();
                h[d] = 1e-4;
                const double up = modified_action(f, 0.4, t, tau, Ri, Rj, p + h).action;
                const double dn = modified_action(f, 0.4, t, tau, Ri, Rj, p - h).action;
                EXPECT_LT(std::abs(up - dn) / 2e-4, 1e-6 * tau);
                EXPECT_GT(up + dn - 2 * s0.action, 0.0);  // minimum in p: quadratic coefficient tau/2
            }
        }
    }
    EXPECT_THROW(saddle_momentum(f, 10.0, 0.0, Ri, Rj), ConfigError);
}

TEST(Engine, ChannelsAddUp) {
    const auto m = test::fixture("ring.json");
    const auto orbs = m.orbitals_labelled("HOMO");
    const auto f = test::standard_field();
    const auto tau = TauGrid::for_field(f, 64);
    const DipoleEngine all(m, orbs, f, tau), direct(m, orbs, f, tau, ChannelFilter::direct),
        transfer(m, orbs, f, tau, ChannelFilter::transfer);
    EXPECT_EQ(direct.pairs().size(), 20u);
    EXPECT_EQ(transfer.pairs().size(), 380u);
    for (double t : {260.0, 287.5, 301.25}) {
        const CVec3 a = all.dipole_at_time(t), b = direct.dipole_at_time(t) + transfer.dipole_at_time(t);
        EXPECT_LT((a - b).norm(), 1e-12 * a.norm()) << t;
    }
}

TEST(Engine, VectorPotentialGaugeConstantCancels) {
    const auto m = test::s_dimer(1.4, 0.5, 0.45);
    const LaserField a(0.119362, 0.056954, Vec3(0.8, 0.6, 0.0), 0.0, VectorPotentialConvention::turn_on_zero);
    const LaserField b(0.119362, 0.056954, Vec3(0.8, 0.6, 0.0), 0.0, VectorPotentialConvention::pure_cosine);
    const auto tau = TauGrid::for_field(a, 128);
    const DipoleEngine ea(m, {0}, a, tau), eb(m, {0}, b, tau);
    for (double t : {230.0, 251.0, 290.0}) {
        const CVec3 da = ea.dipole_at_time(t), db = eb.dipole_at_time(t);
        EXPECT_LT((da - db).norm(), 1e-9 * da.norm()) << t;
    }
}

TEST(Engine, CentrosymmetricHalfCycleAntisymmetry) {
    const auto m = test::s_dimer(1.4, 0.5, 0.45);
    const auto f = test::standard_field(Vec3(0.6, 0.8, 0.0));
    const auto tau = TauGrid::for_field(f, 128);
    const DipoleEngine e(m, {0}, f, tau);
    for (double t : {240.0, 263.0}) {
        const CVec3 d0 = e.dipole_at_time(t), d1 = e.dipole_at_time(t + 0.5 * f.period());
        EXPECT_LT((d0 + d1).norm(), 1e-9 * d0.norm()) << t;
    }
}

TEST(Engine, RingDrivenAlongNormalRespondsAlongNormalOnly) {
    const auto m = test::fixture("ring.json");
    const auto f = test::standard_field(Vec3::UnitZ());
    const DipoleEngine e(m, m.orbitals_labelled("HOMO"), f, TauGrid::for_field(f, 64));
    for (double t : {250.0, 275.0}) {
        const CVec3 d = e.dipole_at_time(t);
        EXPECT_GT(std::abs(d.z()), 0.0);
        EXPECT_LT(std::abs(d.x()), 1e-10 * std::abs(d.z()));
        EXPECT_LT(std::abs(d.y()), 1e-10 * std::abs(d.z()));
    }
}

TEST(Engine, ZeroFieldGivesZeroDipole) {
    const auto m = test::s_dimer(1.0);
    const LaserField f(0.0, 0.056954, Vec3::UnitX());
    const DipoleEngine e(m, {0}, f, TauGrid::for_field(f, 32));
    EXPECT_EQ(e.dipole_at_time(300.0).norm(), 0.0);
}

TEST(Engine, BeforeTurnOnOnlyTheSwitchedOnPartContributes) {
    const auto m = test::s_atom();
    const auto f = test::standard_field();
    const DipoleEngine e(m, {0}, f, TauGrid::for_field(f, 64));
    EXPECT_EQ(e.dipole_at_time(0.0).norm(), 0.0);
    EXPECT_EQ(e.dipole_at_time(-5.0).norm(), 0.0);
}

TEST(Engine, ParallelSeriesIsDeterministic) {
    const auto m = test::s_dimer(1.2);
    const auto f = test::standard_field();
    const DipoleEngine e(m, {0}, f, TauGrid::for_field(f, 32));
    const auto grid = TimeGrid::for_field(f, 32, 2, 2);
    const auto a = e.time_series(grid, 1), b = e.time_series(grid, 3);
    ASSERT_EQ(a.size(), grid.count);
    for (std::size_t n = 0; n < a.size(); ++n) EXPECT_EQ(a.dipole[n], b.dipole[n]);
    EXPECT_GT(max_abs(a.dipole), 0.0);
    EXPECT_NEAR(a.step(), f.period() / 32, 1e-12);
}

TEST(Engine, PerOrbitalSeriesSumToCoherentTotal) {
    const auto m = test::fixture("bowl.json");
    const auto orbs = m.orbitals_labelled("HOMO");
    ASSERT_EQ(orbs.size(), 2u);
    const auto f = test::standard_field();
    const DipoleEngine e(m, orbs, f, TauGrid::for_field(f, 32));
    const auto s = e.time_series({260.0, 3.0, 4}, 1);
    for (std::size_t n = 0; n < s.size(); ++n)
        EXPECT_LT((s.per_orbital[0][n] + s.per_orbital[1][n] - s.dipole[n]).norm(), 1e-15 * (1 + s.dipole[n].norm()));
}

TEST(Engine, RejectsBadSetup) {
    const auto m = test::s_atom();
    const auto f = test::standard_field();
    EXPECT_THROW(DipoleEngine(m, {}, f, TauGrid::for_field(f, 32)), ConfigError);
    EXPECT_THROW(TauGrid(0.0, 10.0, 16), ConfigError);
    EXPECT_THROW(TauGrid(0.05, 10.0, 4), ConfigError);
    EXPECT_THROW(TimeGrid::for_field(f, 1, 2, 2), ConfigError);
}
