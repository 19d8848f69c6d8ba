#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "veil/planar.hpp"

using veil::Scene2D;

namespace {

constexpr double kPi = std::numbers::pi_v<double>;

Scene2D two_adversary_scene(double a0, double a1, double base, double m, double k, double delta) {
    Scene2D scene;
    scene.adversary_angles = {a0, a1};
    scene.base_strength = base;
    scene.max_strength = m;
    scene.decay_slope = k;
    scene.interference_delta = delta;
    return scene;
}

}  // namespace

TEST(Angles, WrapAndDistance) {
    EXPECT_DOUBLE_EQ(veil::wrap_angle(0.0), 0.0);
    EXPECT_DOUBLE_EQ(veil::wrap_angle(veil::kTwoPi), 0.0);
    EXPECT_NEAR(veil::wrap_angle(-0.1), veil::kTwoPi - 0.1, 1e-15);
    EXPECT_NEAR(veil::wrap_angle(7.5), 7.5 - veil::kTwoPi, 1e-15);

    EXPECT_DOUBLE_EQ(veil::wrapped_distance(0.0, kPi), kPi);
    EXPECT_NEAR(veil::wrapped_distance(0.1, veil::kTwoPi - 0.1), 0.2, 1e-15);
    EXPECT_DOUBLE_EQ(veil::wrapped_distance(1.0, 1.0), 0.0);
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int i = 0; i < 500; ++i) {
        const double a = u(gen), b = u(gen);
        const double d = veil::wrapped_distance(a, b);
        EXPECT_GE(d, 0.0);
        EXPECT_LE(d, kPi);
        EXPECT_DOUBLE_EQ(d, veil::wrapped_distance(b, a));
        EXPECT_NEAR(d, veil::wrapped_distance(a + veil::kTwoPi, b), 1e-9);
    }
}

TEST(Scene, ValidationRejectsBadScenes) {
    auto ok = two_adversary_scene(0.3, 1.5, 20, 30, 2, 1);
    EXPECT_NO_THROW(veil::validate(ok));

    auto bad = ok;
    bad.base_strength = 0.0;
    EXPECT_THROW(veil::validate(bad), veil::ParameterError);
    bad = ok;
    bad.base_strength = 31.0;
    EXPECT_THROW(veil::validate(bad), veil::ParameterError);
    bad = ok;
    bad.tau = 0.0;
    EXPECT_THROW(veil::validate(bad), veil::ParameterError);
    bad = ok;
    bad.tau = kPi;
    EXPECT_THROW(veil::validate(bad), veil::ParameterError);
    bad = ok;
    bad.decay_slope = 0.0;
    EXPECT_THROW(veil::validate(bad), veil::ParameterError);
    bad = ok;
    bad.interference_delta = -0.5;
    EXPECT_THROW(veil::validate(bad), veil::ParameterError);
    bad = ok;
    bad.adversary_angles = {1.0, std::nan("")};
    EXPECT_THROW(veil::validate(bad), veil::ParameterError);

    bad = ok;
    bad.adversary_angles = {0.5, 0.5};
    try {
        veil::validate(bad);
        FAIL() << "coincident angles accepted";
    } catch (const veil::ParameterError& e) {
        EXPECT_NE(std::string(e.what()).find("0 and 1"), std::string::npos);
    }
}

TEST(Narrowband, VisibilityWindowIsStrict) {
    EXPECT_TRUE(veil::narrowband_visible(1.0, 1.0999, 0.1));
    EXPECT_FALSE(veil::narrowband_visible(1.0, 1.1, 0.1));  // exactly tau: hidden
    EXPECT_FALSE(veil::narrowband_visible(1.0, 1.2, 0.1));
    EXPECT_TRUE(veil::narrowband_visible(0.05, veil::kTwoPi - 0.04, 0.1));  // across the seam
}

TEST(Narrowband, RejectsCrowdedAdversaries) {
    auto scene = two_adversary_scene(1.0, 1.15, 20, 30, 2, 1);
    scene.tau = 0.1;  // separation 0.15 <= 2*tau
    veil::SeededRng rng(5);
    try {
        veil::narrowband_round(scene, rng);
        FAIL() << "crowded scene accepted";
    } catch (const veil::GeometryError& e) {
        EXPECT_NE(std::string(e.what()).find("0 and 1"), std::string::npos);
    }
}

TEST(Narrowband, AtMostOneObserverAndCalibratedRate) {
    auto scene = two_adversary_scene(0.0, kPi, 20, 30, 2, 1);
    scene.tau = 0.1;
    veil::SeededRng rng(2024);
    const int rounds = 100000;
    int seen[2] = {0, 0};
    for (int i = 0; i < rounds; ++i) {
        const auto round = veil::narrowband_round(scene, rng);
        EXPECT_GE(round.theta, 0.0);
        EXPECT_LT(round.theta, veil::kTwoPi);
        ASSERT_LE(round.observers.size(), 1u);
        for (std::size_t idx : round.observers) ++seen[idx];
    }
    // Each adversary catches the beam with probability 2*tau / 2*pi.
    const double expect = scene.tau / kPi;
    EXPECT_NEAR(seen[0] / static_cast<double>(rounds), expect, 0.002);
    EXPECT_NEAR(seen[1] / static_cast<double>(rounds), expect, 0.002);
}

TEST(Narrowband, DeterministicGivenSeed) {
    auto scene = two_adversary_scene(0.0, kPi, 20, 30, 2, 1);
    veil::SeededRng r1(9);
    veil::SeededRng r2(9);
    for (int i = 0; i < 100; ++i) {
        const auto a = veil::narrowband_round(scene, r1);
        const auto b = veil::narrowband_round(scene, r2);
        EXPECT_EQ(a.theta, b.theta);
        EXPECT_EQ(a.observers, b.observers);
    }
}

TEST(Gradual, LinearDecayHandChecked) {
    const auto scene = two_adversary_scene(0.3, 1.5, 20, 30, 2, 1);
    EXPECT_NEAR(veil::gradual_reading(scene, 0.9, 20.0, 0, false), 18.8, 1e-12);
    EXPECT_NEAR(veil::gradual_reading(scene, 0.9, 20.0, 1, false), 18.8, 1e-12);
    EXPECT_NEAR(veil::gradual_reading(scene, 0.9, 20.0, 0, true), 17.8, 1e-12);
    EXPECT_DOUBLE_EQ(veil::gradual_reading(scene, 0.3, 20.0, 0, false), 20.0);
    // Floor at zero.
    EXPECT_EQ(veil::gradual_reading(scene, 0.3 + kPi, 1.0, 0, false), 0.0);
    // Guard rails.
    EXPECT_THROW(veil::gradual_reading(scene, 0.9, -0.1, 0, false), veil::ProtocolError);
    EXPECT_THROW(veil::gradual_reading(scene, 0.9, 30.1, 0, false), veil::ProtocolError);
    EXPECT_THROW(veil::gradual_reading(scene, 0.9, 20.0, 2, false), veil::ParameterError);
}

TEST(Solver, WorkedInstance) {
    // Separation pi/3 (half-separation 0.5236), slope 2, delta 1: turn by
    // 0.25 toward the interfered side and raise strength to 20.5.
    const auto scene = two_adversary_scene(0.4764, 1.5236, 20, 30, 2, 1);
    const auto sol = veil::solve_two_adversary(scene, 1);
    ASSERT_TRUE(sol.feasible);
    EXPECT_TRUE(sol.reason.empty());
    EXPECT_NEAR(sol.theta, 1.25, 1e-12);
    EXPECT_DOUBLE_EQ(sol.alpha, 20.5);
    for (std::size_t i = 0; i < 2; ++i) {
        const double with_person = veil::gradual_reading(scene, sol.theta, sol.alpha, i, i == 1);
        EXPECT_NEAR(with_person, veil::baseline_reading(scene, i), 1e-12);
    }
}

TEST(Solver, MirrorsWhenTheOtherSideIsHit) {
    const auto scene = two_adversary_scene(0.4764, 1.5236, 20, 30, 2, 1);
    const auto sol = veil::solve_two_adversary(scene, 0);
    ASSERT_TRUE(sol.feasible);
    EXPECT_NEAR(sol.theta, 0.75, 1e-12);
    for (std::size_t i = 0; i < 2; ++i) {
        const double with_person = veil::gradual_reading(scene, sol.theta, sol.alpha, i, i == 0);
        EXPECT_NEAR(with_person, veil::baseline_reading(scene, i), 1e-12);
    }
}

TEST(Solver, RandomFeasibleScenesCancelExactly) {
    std::mt19937_64 gen(33);
    std::uniform_real_distribution<double> angle(0.0, veil::kTwoPi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int checked = 0;
    while (checked < 300) {
        const double a0 = angle(gen);
        const double a1 = angle(gen);
        const double sep = veil::wrapped_distance(a0, a1);
        if (sep < 1e-3) continue;
        const double k = 0.2 + 4.0 * unit(gen);
        const double phi0 = sep / 2.0;
        const double delta = 2.0 * k * phi0 * 0.95 * unit(gen);  // strictly inside the wedge
        const double base = k * phi0 + 5.0 * unit(gen);          // clears the floor
        const double m = base + delta / 2.0 + 5.0 * unit(gen);   // leaves power headroom
        const auto scene = two_adversary_scene(a0, a1, base, m, k, delta);
        const std::size_t hit = checked % 2 ? 1 : 0;
        const auto sol = veil::solve_two_adversary(scene, hit);
        ASSERT_TRUE(sol.feasible) << "reason: " << sol.reason;
        for (std::size_t i = 0; i < 2; ++i) {
            const double with_person =
                veil::gradual_reading(scene, sol.theta, sol.alpha, i, i == hit);
            EXPECT_NEAR(with_person, veil::baseline_reading(scene, i), 1e-9);
        }
        ++checked;
    }
}

TEST(Solver, InfeasibilityReasonsInOrder) {
    // Boundary case delta = 2*k*phi0 is already infeasible.
    const auto boundary = two_adversary_scene(1.5, 2.5, 20, 30, 1, 1);
    const auto b = veil::solve_two_adversary(boundary, 0);
    EXPECT_FALSE(b.feasible);
    EXPECT_EQ(b.reason, "angular-separation");

    // Power budget too tight (separation is fine).
    const auto tight = two_adversary_scene(0.4764, 1.5236, 20, 20.4, 2, 1);
    const auto t = veil::solve_two_adversary(tight, 0);
    EXPECT_FALSE(t.feasible);
    EXPECT_EQ(t.reason, "power-limit");

    // Baseline already clamped to zero (base < k * phi0).
    const auto dim = two_adversary_scene(0.0, 3.0, 1.0, 30, 2, 0.5);
    const auto d = veil::solve_two_adversary(dim, 0);
    EXPECT_FALSE(d.feasible);
    EXPECT_EQ(d.reason, "clamping");

    // Separation trouble outranks the power budget.
    const auto both = two_adversary_scene(1.5, 2.5, 20, 20.1, 1, 2.5);
    const auto both_sol = veil::solve_two_adversary(both, 0);
    EXPECT_FALSE(both_sol.feasible);
    EXPECT_EQ(both_sol.reason, "angular-separation");

    // And the power budget outranks clamping.
    const auto pc = two_adversary_scene(0.0, 3.0, 2.0, 2.4, 2, 1.0);
    const auto pc_sol = veil::solve_two_adversary(pc, 0);
    EXPECT_FALSE(pc_sol.feasible);
    EXPECT_EQ(pc_sol.reason, "power-limit");
}

TEST(Solver, AntipodalAndSeamCrossingPairs) {
    // Antipodal pair: the midpoint convention still cancels exactly.
    const auto anti = two_adversary_scene(0.0, kPi, 20, 30, 2, 1);
    const auto sa = veil::solve_two_adversary(anti, 0);
    ASSERT_TRUE(sa.feasible);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(veil::gradual_reading(anti, sa.theta, sa.alpha, i, i == 0),
                    veil::baseline_reading(anti, i), 1e-12);
    }

    // Pair whose minor arc crosses the 0/2*pi seam.
    const auto seam = two_adversary_scene(6.1, 0.2, 5, 30, 2, 0.3);
    const auto ss = veil::solve_two_adversary(seam, 1);
    ASSERT_TRUE(ss.feasible);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(veil::gradual_reading(seam, ss.theta, ss.alpha, i, i == 1),
                    veil::baseline_reading(seam, i), 1e-12);
    }
}

TEST(Solver, RequiresExactlyTwoAdversaries) {
    auto scene = two_adversary_scene(0.3, 1.5, 20, 30, 2, 1);
    scene.adversary_angles.push_back(3.0);
    EXPECT_THROW(veil::solve_two_adversary(scene, 0), veil::GeometryError);
    EXPECT_THROW(veil::baseline_reading(scene, 0), veil::GeometryError);
    scene.adversary_angles = {0.3, 1.5};
    EXPECT_THROW(veil::solve_two_adversary(scene, 2), veil::ParameterError);
    EXPECT_THROW(veil::baseline_reading(scene, 2), veil::ParameterError);
}

TEST(Solver, ZeroPersonEffectKeepsTheBaseline) {
    const auto scene = two_adversary_scene(0.4764, 1.5236, 20, 30, 2, 0);
    const auto sol = veil::solve_two_adversary(scene, 0);
    ASSERT_TRUE(sol.feasible);
    EXPECT_DOUBLE_EQ(sol.alpha, 20.0);
    EXPECT_NEAR(sol.theta, 1.0, 1e-12);
}
