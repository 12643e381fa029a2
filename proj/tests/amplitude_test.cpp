#include "tinj/amplitude.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tinj/derive.hpp"
#include "tinj/layout.hpp"
#include "tinj/rng.hpp"

using namespace tinj;

namespace {

constexpr double kPi = std::numbers::pi;

// |Lambda_00> of the distance-2 code, coefficients by Hamming weight.
LogicalStateForm lambda00() {
    LogicalStateForm f;
    f.alpha_poly = AmplitudePoly{5, {1, 0, 0, 2, 1, 0}};
    f.beta_poly = AmplitudePoly{5, {0, 0, 2, 2, 0, 0}};
    f.trajectory = Trajectory{0, 0, 2, 2};
    return f;
}

LogicalStateForm lambda01() {
    LogicalStateForm f;
    f.alpha_poly = AmplitudePoly{5, {0, 1, 1, 1, 1, 0}};
    f.beta_poly = AmplitudePoly{5, {0, 1, 1, 1, 1, 0}};
    f.trajectory = Trajectory{0, 0b10, 2, 2};  // z = "01"
    return f;
}

}  // namespace

TEST(Evaluate, PolarCases) {
    const LogicalStateForm f = lambda00();
    EXPECT_NEAR(std::abs(f.alpha_poly.evaluate({0.0, 0.0}) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(f.beta_poly.evaluate({0.0, 0.0})), 0.0, 1e-15);
    // At alpha = beta = 1/sqrt(2) every monomial contributes equally, so the
    // value is the coefficient hand-sum (1 + 2 + 1) over 2^(5/2).
    const complexd v = f.alpha_poly.evaluate({kPi / 2, 0.0});
    EXPECT_NEAR(v.real(), (1.0 + 2.0 + 1.0) / std::pow(2.0, 2.5), 1e-12);
    EXPECT_NEAR(v.imag(), 0.0, 1e-12);
}

TEST(Normalize, PlusStateForAllRotations) {
    const LogicalStateForm f = lambda01();
    for (double theta : {0.3, 1.1, 2.8}) {
        const auto [a, b] = normalize(f, {theta, 0.9});
        EXPECT_NEAR(std::abs(a - complexd{std::numbers::sqrt2 / 2, 0.0}), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(b - complexd{std::numbers::sqrt2 / 2, 0.0}), 0.0, 1e-12);
    }
}

TEST(Normalize, PolarCasesAndZeroState) {
    const auto [a, b] = normalize(lambda00(), {0.0, 0.0});
    EXPECT_NEAR(std::abs(a - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(b), 0.0, 1e-12);
    // theta = pi leaves only beta^5 monomials, and neither polynomial has one.
    EXPECT_THROW(normalize(lambda00(), {kPi, 0.3}), ZeroStateError);
}

TEST(Normalize, UnitNormAndPositiveLead) {
    SplitMix64 rng(11);
    const LogicalStateForm f = lambda00();
    for (int k = 0; k < 25; ++k) {
        const PhysicalRotation rot{0.2 + 2.7 * rng.uniform(), 2 * kPi * rng.uniform()};
        const auto [a, b] = normalize(f, rot);
        EXPECT_NEAR(std::norm(a) + std::norm(b), 1.0, 1e-12);
        EXPECT_GT(a.real(), 0.0);
        EXPECT_NEAR(a.imag(), 0.0, 1e-12);
    }
}

TEST(ToBloch, PlusStateSitsOnEquator) {
    const BlochPoint p = to_bloch(lambda01(), {1.234, 0.77});
    EXPECT_NEAR(p.theta_l, kPi / 2, 1e-12);
    EXPECT_NEAR(p.phi_l, 0.0, 1e-12);
}

TEST(ToBloch, GlobalPhaseInvariance) {
    LogicalStateForm f = lambda00();
    LogicalStateForm g = f;
    for (auto& c : g.alpha_poly.coeffs) c = -c;
    for (auto& c : g.beta_poly.coeffs) c = -c;
    const PhysicalRotation rot{1.7, 2.2};
    const BlochPoint pf = to_bloch(f, rot);
    const BlochPoint pg = to_bloch(g, rot);
    EXPECT_NEAR(pf.theta_l, pg.theta_l, 1e-14);
    EXPECT_NEAR(pf.phi_l, pg.phi_l, 1e-14);
}

TEST(ToBloch, ConjugationSymmetry) {
    const LogicalStateForm f = lambda00();
    SplitMix64 rng(5);
    for (int k = 0; k < 10; ++k) {
        const double theta = 0.2 + 2.6 * rng.uniform();
        const double phi = 0.1 + 3.0 * rng.uniform();
        const complexd forward = f.alpha_poly.evaluate({theta, phi});
        const complexd mirrored = f.alpha_poly.evaluate({theta, 2 * kPi - phi});
        EXPECT_NEAR(std::abs(std::conj(forward) - mirrored), 0.0, 1e-12);
    }
}

TEST(TrajectoryProbability, SingleQubitCodeIsCertain) {
    LogicalStateForm f;
    f.alpha_poly = AmplitudePoly{1, {1, 0}};
    f.beta_poly = AmplitudePoly{1, {0, 1}};
    f.trajectory = Trajectory{0, 0, 0, 0};
    EXPECT_NEAR(trajectory_probability(f, {1.0, 0.3}), 1.0, 1e-15);
}

TEST(TrajectoryProbability, SumsToOneOverAllTrajectories) {
    const CodeLayout lay = build_unrotated_layout(2);
    const auto forms = enumerate_all_states(lay);
    ASSERT_EQ(forms.size(), 16u);
    const PhysicalRotation rot{1.0, 0.3};
    double total = 0.0;
    for (const auto& [traj, form] : forms) total += trajectory_probability(form, rot);
    EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(MatchTeleportation, EquatorialZeroFindsPlusState) {
    std::vector<LogicalStateForm> forms{lambda00(), lambda01()};
    const TeleportTarget target{TeleportTarget::Kind::equatorial, 0.0};
    const RotationGrid grid{1.0, 1.0, 1, 0.5, 0.5, 1};
    const auto hits = match_teleportation_target(forms, target, grid, 1e-9);
    ASSERT_FALSE(hits.empty());
    EXPECT_EQ(hits.front().trajectory, lambda01().trajectory);
    EXPECT_LT(hits.front().residual, 1e-12);
}

TEST(MatchTeleportation, GridSearchOverDistanceTwoForms) {
    const CodeLayout lay = build_unrotated_layout(2);
    const auto all = enumerate_all_states(lay);
    std::vector<LogicalStateForm> forms;
    for (const auto& [traj, form] : all) forms.push_back(form);
    const TeleportTarget target{TeleportTarget::Kind::equatorial, kPi / 4};
    const RotationGrid grid{0.1, kPi - 0.1, 40, 0.0, 2 * kPi, 40};
    const auto hits = match_teleportation_target(forms, target, grid, 0.05);
    ASSERT_FALSE(hits.empty());
    for (std::size_t i = 1; i < hits.size(); ++i)
        EXPECT_LE(hits[i - 1].residual, hits[i].residual);
    // reported residual must reproduce from the reported rotation
    const TeleportMatch& best = hits.front();
    for (const auto& [traj, form] : all) {
        if (!(traj == best.trajectory)) continue;
        const auto [a, b] = normalize(form, best.rotation);
        const auto [ta, tb] = target.amplitudes();
        const double residual = 1.0 - std::norm(std::conj(ta) * a + std::conj(tb) * b);
        EXPECT_NEAR(residual, best.residual, 1e-12);
    }
}

TEST(MatchTeleportation, EmptyResultWhenUnreachable) {
    std::vector<LogicalStateForm> forms{lambda00()};
    const TeleportTarget target{TeleportTarget::Kind::polar_real, 0.7};
    const RotationGrid grid{1.0, 1.0, 1, 0.0, 0.0, 1};
    EXPECT_THROW(match_teleportation_target(forms, target, grid, 1e-15), EmptyResultError);
    EXPECT_THROW(match_teleportation_target({}, target, grid), EmptyResultError);
}
