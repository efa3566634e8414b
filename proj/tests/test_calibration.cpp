#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace segnet;

// relative tolerance for values the table prints exactly; .95 has no exact binary form
constexpr double kExact = 1e-12;

TEST(Calibrate, DefaultTargets) {
    const ModelParams m = calibrate(CalibrationTargets{});
    EXPECT_NEAR(m.s0(), 0.9048, 1e-4);
    EXPECT_NEAR(m.c0, 9.5, 9.5 * kExact);
    EXPECT_NEAR(m.c1_pk(), 4.75, 4.75 * kExact);
    EXPECT_NEAR(m.c1_lambda(), 14.25, 14.25 * kExact);
    EXPECT_EQ(m.theta, 80000.0);
    EXPECT_EQ(m.rho, 1e-4);
    EXPECT_EQ(m.alpha, 0.5);
    EXPECT_FALSE(m.explicit_split);
}

TEST(Calibrate, HitsTargets) {
    const ModelParams m = calibrate(CalibrationTargets{});
    const Model econ(m);
    const MarketState st = econ.market_state({1.0, 0.0});
    EXPECT_NEAR(st.s_AR, 0.95, 1e-12);
    EXPECT_NEAR(0.5 * (st.w_A + st.w_B), 40000, 1e-8);
    // informal share of job finding at the corner
    const double x = 0.5 * (m.c1_pk() + m.c1_lambda());
    EXPECT_NEAR(x / (m.c0 + x), 0.5, 1e-12);
    EXPECT_NEAR(m.c1_lambda() / m.c1_pk(), 3.0, 1e-12);
}

TEST(Calibrate, ExplicitSplit) {
    const ModelParams m = calibrate(CalibrationTargets{}, ExplicitSplit{});
    EXPECT_TRUE(m.explicit_split);
    EXPECT_NEAR(m.c1, 25.0, 25 * kExact);
    EXPECT_NEAR(m.c1_pk(), 4.75, 1e-10);
    EXPECT_THROW(calibrate(CalibrationTargets{}, ExplicitSplit{0.1, 0.1, 0.5}), InvalidSplit);
    EXPECT_THROW(calibrate(CalibrationTargets{}, ExplicitSplit{0.2, 0.2, 1.2}), InvalidSplit);
}

TEST(Calibrate, InfeasibleTargets) {
    CalibrationTargets t;
    t.target_employment = 1.0;
    EXPECT_THROW(calibrate(t), InfeasibleTarget);
    t = {};
    t.informal_share = 0.0;
    EXPECT_THROW(calibrate(t), InfeasibleTarget);
    t = {};
    t.rho = -1;
    EXPECT_THROW(calibrate(t), InfeasibleTarget);
}

TEST(AlphaHat, Value) {
    const double a = find_alpha_hat(calibrate(CalibrationTargets{}));
    EXPECT_NEAR(a, 0.5904, 1e-3);
    // frozen reference from an independent bisection in long double
    EXPECT_NEAR(a, 0.59041405095510635, 1e-13);
    EXPECT_NEAR(corner_wage_gap(a), 0.306, 2e-3);
    EXPECT_NEAR(corner_indifference(calibrate(CalibrationTargets{}), a), 0.0, 1e-14);
}

TEST(AlphaHat, WagesAtThreshold) {
    ModelParams m = calibrate(CalibrationTargets{});
    m.alpha = find_alpha_hat(m);
    const MarketState st = Model(m).market_state({1.0, 0.0});
    EXPECT_NEAR(st.w_A, 47233, 50);
    EXPECT_NEAR(st.w_B, 32767, 50);
    EXPECT_NEAR(st.dPi_G, 0.0, 1e-12);
}

TEST(AlphaHat, InvariantToTieSplit) {
    const double base = find_alpha_hat(calibrate(CalibrationTargets{}));
    for (const ExplicitSplit s : {ExplicitSplit{}, ExplicitSplit{0.05, 0.14, 0.57}, ExplicitSplit{0.1, 0.0, 0.3}}) {
        EXPECT_NEAR(find_alpha_hat(calibrate(CalibrationTargets{}, s)), base, 1e-9);
    }
}

TEST(AlphaHat, LinearUtilityLimit) {
    CalibrationTargets t;
    t.rho = 1e-10;
    const ModelParams m = calibrate(t);
    const Model econ(m);
    const double r = econ.s_high() / econ.s_low();
    EXPECT_NEAR(find_alpha_hat(m), r / (1 + r), 1e-6);
}

TEST(Calibrate, InformalShareHalfPinsC0) {
    const ModelParams m = calibrate(CalibrationTargets{});
    EXPECT_NEAR(m.c0, 0.5 * (m.c1_pk() + m.c1_lambda()), 1e-12);
}
