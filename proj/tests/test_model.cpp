#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace segnet;
using segnet::test::calibrated;
using segnet::test::calibrated_split;

TEST(TieProbability, TableEntries) {
    const ModelParams m = ModelParams::from_split(0.1, 0.2, 0.3, 1.0, 1.0, 1.0, 0.5, 1.0);
    EXPECT_DOUBLE_EQ(tie_probability(true, true, m), 0.6);
    EXPECT_DOUBLE_EQ(tie_probability(false, true, m), 0.1 + 0.2);
    EXPECT_DOUBLE_EQ(tie_probability(false, false, m), 0.1);
    EXPECT_DOUBLE_EQ(tie_probability(true, false, m), 0.1 + 0.3);
}

TEST(ModelParams, ValidationErrors) {
    EXPECT_THROW(ModelParams::from_split(0.5, 0.3, 0.3, 1, 1, 1, 0.5, 1), InvalidParams);
    EXPECT_THROW(ModelParams::from_split(0.1, 0.1, 0.0, 1, 1, 1, 0.5, 1), InvalidParams);
    EXPECT_THROW(ModelParams::from_split(0.1, 0.1, 0.1, 1, 1, 1, 1.0, 1), InvalidParams);
    EXPECT_THROW(ModelParams::from_split(0.1, 0.1, 0.1, 0, 1, 1, 0.5, 1), InvalidParams);
    EXPECT_THROW(ModelParams::from_split(0.1, 0.1, 0.1, 1, 1, 1, 0.5, -1), InvalidParams);
    EXPECT_THROW(ModelParams::from_products(1, 1, NAN, 1, 0.5, 1), InvalidParams);
    // products may exceed one; they are rates, not probabilities
    EXPECT_NO_THROW(ModelParams::from_products(9.5, 4.75, 14.25, 80000, 0.5, 1e-4));
}

TEST(ModelParams, SplitAndProductFormsAgree) {
    const Model a(calibrated(0.6)), b(calibrated_split(0.6));
    EXPECT_NEAR(calibrated_split().c1, 25.0, 1e-12);
    test::ProfileGen gen(7);
    for (int i = 0; i < 50; ++i) {
        const StrategyProfile mu = gen();
        const MarketState x = a.market_state(mu), y = b.market_state(mu);
        EXPECT_NEAR(x.dPi_R, y.dPi_R, 1e-12);
        EXPECT_NEAR(x.w_A, y.w_A, 1e-7);
    }
}

TEST(EmploymentProb, CalibratedValues) {
    const ModelParams m = calibrated();
    EXPECT_NEAR(employment_prob(0.0, m), 19.0 / 21.0, 1e-12);
    EXPECT_NEAR(employment_prob(0.5 * (m.p + m.kappa + m.lambda), m), 0.95, 1e-12);
    EXPECT_NEAR(employment_prob(0.5 * (m.p + m.kappa), m), 11.875 / 12.875, 1e-12);
    EXPECT_THROW(employment_prob(-1e-9, m), DomainError);
}

TEST(EmploymentProb, IncreasingAndBounded) {
    const EmploymentFunction s{9.5, 25.0};
    double prev = s(0.0);
    for (int i = 1; i <= 1000; ++i) {
        const double v = s(i * 1e-3);
        EXPECT_GT(v, prev);
        EXPECT_LT(v, 1.0);
        prev = v;
    }
    // derivatives against central differences
    for (double x : {0.0, 0.1, 0.38}) {
        const double h = 1e-5;
        EXPECT_NEAR(s.derivative(x), (s(x + h) - s(std::max(0.0, x - h))) / (x > 0 ? 2 * h : h), 1e-4);
        if (x > 0) {
            EXPECT_NEAR(s.second_derivative(x), (s(x + h) - 2 * s(x) + s(x - h)) / (h * h), 1e-3);
        }
    }
}

TEST(GroupEmploymentRates, CompleteSegregation) {
    const EmploymentRates r = group_employment_rates({1.0, 0.0}, calibrated());
    EXPECT_NEAR(r.s_AR, 0.95, 1e-12);
    EXPECT_NEAR(r.s_BG, 0.95, 1e-12);
    EXPECT_NEAR(r.s_BR, 0.9223, 5e-5);
    EXPECT_NEAR(r.s_AG, 0.9223, 5e-5);
}

TEST(GroupEmploymentRates, SymmetricProfile) {
    test::ProfileGen gen(3);
    for (int i = 0; i < 20; ++i) {
        const double m = gen.uniform();
        const EmploymentRates r = group_employment_rates({m, m}, calibrated());
        EXPECT_EQ(r.s_AR, r.s_AG);
        EXPECT_EQ(r.s_BR, r.s_BG);
    }
}

// Friend measure rebuilt from tie probabilities and population masses.
TEST(GroupEmploymentRates, OracleFromTieProbabilities) {
    const ModelParams m = calibrated_split();
    const double muR = 1.0, muG = 0.3;
    // masses of the four cells
    const double mass[2][2] = {{muR / 2, (1 - muR) / 2}, {muG / 2, (1 - muG) / 2}};
    auto x_of = [&](int g, int e) {
        double x = 0.0;
        for (int h = 0; h < 2; ++h) x += mass[h][e] * tie_probability(g == h, true, m);
        return x;
    };
    auto s = [&](double x) { return (m.c0 + m.c1 * x) / (1 + m.c0 + m.c1 * x); };
    const EmploymentRates r = group_employment_rates({muR, muG}, m);
    EXPECT_NEAR(r.s_AR, s(x_of(0, 0)), 1e-14);
    EXPECT_NEAR(r.s_BR, s(x_of(0, 1)), 1e-14);
    EXPECT_NEAR(r.s_AG, s(x_of(1, 0)), 1e-14);
    EXPECT_NEAR(r.s_BG, s(x_of(1, 1)), 1e-14);
}

TEST(GroupEmploymentRates, OrderingFollowsMixingShares) {
    test::ProfileGen gen(11);
    const ModelParams m = calibrated();
    for (int i = 0; i < 200; ++i) {
        const StrategyProfile mu = gen();
        if (mu.mu_R() == mu.mu_G()) continue;
        const EmploymentRates r = group_employment_rates(mu, m);
        if (mu.mu_R() > mu.mu_G()) {
            EXPECT_GT(r.s_AR, r.s_AG);
            EXPECT_LT(r.s_BR, r.s_BG);
        } else {
            EXPECT_LT(r.s_AR, r.s_AG);
            EXPECT_GT(r.s_BR, r.s_BG);
        }
    }
}

TEST(GroupEmploymentRates, KappaDoesNotFlipOrdering) {
    test::ProfileGen gen(12);
    for (int i = 0; i < 200; ++i) {
        const StrategyProfile mu = gen();
        const double kappa = 0.3 * gen.uniform();
        const ModelParams a = ModelParams::from_split(0.1, 0.0, 0.4, 9.5, 25, 80000, 0.5, 1e-4);
        const ModelParams b = ModelParams::from_split(0.1, kappa, 0.4, 9.5, 25, 80000, 0.5, 1e-4);
        const EmploymentRates ra = group_employment_rates(mu, a), rb = group_employment_rates(mu, b);
        EXPECT_EQ(std::signbit(ra.s_AR - ra.s_AG), std::signbit(rb.s_AR - rb.s_AG));
        EXPECT_EQ(std::signbit(ra.s_BR - ra.s_BG), std::signbit(rb.s_BR - rb.s_BG));
    }
}

TEST(LaborSupplies, Examples) {
    const ModelParams m = calibrated();
    const LaborSupplies c = labor_supplies({1.0, 0.0}, m);
    EXPECT_NEAR(c.L_A, 0.475, 1e-12);
    EXPECT_NEAR(c.L_B, 0.475, 1e-12);
    EXPECT_EQ(labor_supplies({0.0, 0.0}, m).L_A, 0.0);
    EXPECT_EQ(labor_supplies({1.0, 1.0}, m).L_B, 0.0);
}

TEST(LaborSupplies, MonotoneInEachShare) {
    test::ProfileGen gen(5, 1e-2);
    const Model econ(calibrated());
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
        const StrategyProfile mu = gen();
        const LaborSupplies rp = econ.supplies({mu.mu_R() + h, mu.mu_G()});
        const LaborSupplies rm = econ.supplies({mu.mu_R() - h, mu.mu_G()});
        const LaborSupplies gp = econ.supplies({mu.mu_R(), mu.mu_G() + h});
        const LaborSupplies gm = econ.supplies({mu.mu_R(), mu.mu_G() - h});
        EXPECT_GT(rp.L_A - rm.L_A, 0.0);
        EXPECT_LT(rp.L_B - rm.L_B, 0.0);
        EXPECT_GT(gp.L_A - gm.L_A, 0.0);
        EXPECT_LT(gp.L_B - gm.L_B, 0.0);
    }
}

TEST(Wages, Examples) {
    const ModelParams m = calibrated(0.5);
    const Wages w = wages(0.3, 0.3, m);
    EXPECT_NEAR(w.w_A, 40000.0, 1e-8);
    EXPECT_NEAR(w.w_B, 40000.0, 1e-8);
    for (double a : {0.55, 0.59041405, 0.7, 0.9}) {
        const MarketState st = market_state({1.0, 0.0}, calibrated(a));
        EXPECT_NEAR(st.w_A, 80000 * a, 1e-7);
        EXPECT_NEAR(st.w_B, 80000 * (1 - a), 1e-7);
    }
    const MarketState hat = market_state({1.0, 0.0}, calibrated(0.5904));
    EXPECT_NEAR(hat.w_A, 47233, 50);
    EXPECT_NEAR(hat.w_B, 32767, 50);
    EXPECT_THROW(wages(0.0, 0.3, m), SingularSupply);
    EXPECT_THROW(wages(0.3, 0.0, m), SingularSupply);
    EXPECT_THROW(market_state({0.0, 0.0}, m), SingularSupply);
    EXPECT_THROW(market_state({1.0, 1.0}, m), SingularSupply);
}

TEST(Wages, ComparativeStatics) {
    const ModelParams m = calibrated(0.65);
    const Wages base = wages(0.4, 0.4, m);
    EXPECT_LT(wages(0.41, 0.4, m).w_A, base.w_A);
    EXPECT_GT(wages(0.4, 0.41, m).w_A, base.w_A);
    // along the diagonal w_A falls and w_B rises
    const Model econ(m);
    double pa = INFINITY, pb = 0.0;
    for (int i = 1; i < 100; ++i) {
        const MarketState st = econ.market_state({i / 100.0, i / 100.0});
        EXPECT_LT(st.w_A, pa);
        EXPECT_GT(st.w_B, pb);
        pa = st.w_A;
        pb = st.w_B;
    }
}

TEST(Utility, Values) {
    const ModelParams m = calibrated();
    EXPECT_EQ(utility(0.0, m), 0.0);
    // 1 - exp(-4) to 20 digits
    EXPECT_NEAR(utility(40000.0, m), 0.98168436111126581970, 1e-16);
    EXPECT_GT(utility(47233, m), utility(32767, m));
    EXPECT_THROW(utility(-1.0, m), DomainError);
    const CaraUtility u{1e-4};
    EXPECT_LT(u(20000) - u(10000), u(10000) - u(0));  // concave
}

TEST(MarketState, Examples) {
    test::ProfileGen gen(21);
    const Model half(calibrated(0.5));
    // swapping occupations maps (m, m) to (1 - m, 1 - m); only m = .5 is fixed
    const MarketState mid = half.market_state({0.5, 0.5});
    EXPECT_NEAR(mid.dPi_R, 0.0, 1e-15);
    EXPECT_NEAR(mid.dPi_G, 0.0, 1e-15);
    for (int i = 0; i < 20; ++i) {
        const double m = gen.uniform();
        const MarketState st = half.market_state({m, m});
        const MarketState mirror = half.market_state({1 - m, 1 - m});
        EXPECT_EQ(st.dPi_R, st.dPi_G);
        EXPECT_NEAR(st.dPi_R, -mirror.dPi_R, 1e-12);
    }
    EXPECT_LT(half.market_state({1.0, 0.0}).dPi_G, 0.0);
    EXPECT_GT(Model(calibrated(0.7)).market_state({1.0, 0.0}).dPi_G, 0.0);
}

TEST(MarketState, RecomputedFromScratchMatches) {
    const Model econ(calibrated(0.63));
    test::ProfileGen gen(4);
    for (int i = 0; i < 50; ++i) {
        const StrategyProfile mu = gen();
        const MarketState st = econ.market_state(mu);
        const EmploymentRates r = group_employment_rates(mu, econ.params());
        const LaborSupplies L = labor_supplies(mu, econ.params());
        const Wages w = wages(L.L_A, L.L_B, econ.params());
        EXPECT_EQ(st.s_AR, r.s_AR);
        EXPECT_EQ(st.L_A, L.L_A);
        EXPECT_EQ(st.w_B, w.w_B);
        EXPECT_EQ(st.Pi_AG, r.s_AG * utility(w.w_A, econ.params()));
        EXPECT_EQ(st.dPi_R, st.Pi_AR - st.Pi_BR);
        EXPECT_EQ(st, market_state(mu, econ.params()));
    }
}

TEST(MarketState, SwapSymmetryExact) {
    const Model econ(calibrated(0.66));
    test::ProfileGen gen(9);
    for (int i = 0; i < 100; ++i) {
        const StrategyProfile mu = gen();
        const MarketState a = econ.market_state(mu), b = econ.market_state(mu.swapped());
        EXPECT_EQ(a.s_AR, b.s_AG);
        EXPECT_EQ(a.s_BR, b.s_BG);
        EXPECT_EQ(a.dPi_R, b.dPi_G);
        EXPECT_EQ(a.dPi_G, b.dPi_R);
    }
}

TEST(WageGap, Examples) {
    EXPECT_NEAR(wage_gap({1.0, 0.0}, calibrated(0.5)), 0.0, 1e-14);
    EXPECT_NEAR(wage_gap({1.0, 0.0}, calibrated(0.5904)), 0.306, 2e-3);
    EXPECT_NEAR(wage_gap({1.0, 0.0}, calibrated(0.55)), 2 - 1 / 0.55, 1e-12);
}

// At a symmetric profile, d2 L_A / d mu_X^2 exceeds the cross derivative when
// c1 lambda < 2 (1 + c0).
TEST(LaborSupplies, SecondDerivativeOrdering) {
    const Model econ(calibrated());
    ASSERT_LT(econ.params().c1_lambda(), 2 * (1 + econ.params().c0));
    const double h = 1e-4;
    auto LA = [&](double r, double g) { return econ.supplies({r, g}).L_A; };
    for (int i = 1; i < 20; ++i) {
        const double m = i / 20.0;
        const double own = (LA(m + h, m) - 2 * LA(m, m) + LA(m - h, m)) / (h * h);
        const double cross = (LA(m + h, m + h) - LA(m + h, m - h) - LA(m - h, m + h) + LA(m - h, m - h)) / (4 * h * h);
        EXPECT_GT(own, cross) << "mu=" << m;
    }
}

TEST(Economy, PluggableProductionAndUtility) {
    struct Linear {
        double output(double la, double lb) const { return la + 2 * lb; }
        double wage_a(double, double) const { return 1.0; }
        double wage_b(double, double) const { return 2.0; }
    };
    struct Log {
        double operator()(double w) const { return std::log1p(w); }
        double derivative(double w) const { return 1 / (1 + w); }
    };
    static_assert(ProductionFunction<Linear>);
    static_assert(UtilityFunction<Log>);
    const Economy<Linear, Log> econ(calibrated(), Linear{}, Log{});
    const MarketState st = econ.market_state({0.5, 0.5});
    EXPECT_DOUBLE_EQ(st.w_A, 1.0);
    EXPECT_DOUBLE_EQ(st.Pi_BR, st.s_BR * std::log1p(2.0));
}

TEST(Diagnostics, CaraFailsWageLimit) {
    const WageLimitCheck c = check_wage_limit(Model(calibrated()));
    EXPECT_FALSE(c.holds);
    for (double u : c.utility_A) EXPECT_LE(u, 1.0);
}

TEST(Diagnostics, LogUtilitySatisfiesWageLimit) {
    struct Log {
        double operator()(double w) const { return std::log1p(w); }
        double derivative(double w) const { return 1 / (1 + w); }
    };
    const ModelParams m = calibrated(0.6);
    const Economy<CobbDouglas, Log> econ(m, CobbDouglas{m.theta, m.alpha}, Log{});
    EXPECT_TRUE(check_wage_limit(econ).holds);
}

TEST(Diagnostics, EmploymentElasticityReportsCalibratedViolation) {
    // the calibrated economy is known to break the second uniqueness assumption
    const EmploymentElasticityCheck c = check_employment_elasticity(Model(calibrated(0.6)));
    EXPECT_GT(c.points, 0);
    EXPECT_GT(c.violations, 0);
    EXPECT_FALSE(c.holds());
}
