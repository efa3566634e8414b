#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace segnet;
using segnet::test::calibrated;
using segnet::test::economy;

TEST(Welfare, TwoFormulasAgree) {
    test::ProfileGen gen(1000);
    for (double a : {0.5, 0.6, 0.75, 0.9}) {
        const Model e = economy(a);
        for (int i = 0; i < 250; ++i) {
            const WelfarePair w = welfare_pair(e, gen());
            EXPECT_LT(w.relative_difference(), 1e-10);
        }
    }
}

TEST(Welfare, SingularCornersThrow) {
    EXPECT_THROW(welfare({0.0, 0.0}, economy()), SingularSupply);
    EXPECT_THROW(welfare({1.0, 1.0}, economy()), SingularSupply);
}

TEST(Welfare, SymmetricUnderSwap) {
    test::ProfileGen gen(8);
    const Model e = economy(0.7);
    for (int i = 0; i < 50; ++i) {
        const StrategyProfile mu = gen();
        EXPECT_NEAR(welfare(mu, e), welfare(mu.swapped(), e), 1e-14);
    }
}

TEST(WorstOff, IgnoresEmptyCells) {
    const Model e = economy(0.7);
    const MarketState st = e.market_state({1.0, 0.0});
    EXPECT_EQ(worst_off_payoff({1.0, 0.0}, e), std::min(st.Pi_AR, st.Pi_BG));
}

TEST(Concavity, CalibratedConditionHolds) {
    const ModelParams m = calibrated();
    EXPECT_LT(m.c1_lambda(), 2 * (1 + m.c0));
    EXPECT_TRUE(concavity_condition(m));
    const ModelParams bad = ModelParams::from_products(1.0, 4.75, 14.25, 80000, 0.5, 1e-4);
    EXPECT_FALSE(concavity_condition(bad));
}

TEST(FirstBest, SegregatedOnGrid) {
    for (double a : {0.5, 0.6, 0.7, 0.8}) {
        const FirstBest fb = first_best(economy(a), 200);
        EXPECT_TRUE(fb.kind == EquilibriumKind::CompleteSegregation ||
                    fb.kind == EquilibriumKind::PartialSegregation)
            << "alpha=" << a;
        // nothing on the grid beats the optimum
        const Model e = economy(a);
        for (int i = 0; i <= 40; ++i)
            for (int j = 0; j <= 40; ++j) {
                const StrategyProfile mu{i / 40.0, j / 40.0};
                if (Model::is_singular(mu)) continue;
                EXPECT_LE(welfare(mu, e), fb.welfare + 1e-12);
            }
    }
    EXPECT_THROW(first_best(economy(0.5), 100), DomainError);
}

TEST(FirstBest, ReportsSymmetricTies) {
    // at alpha = .5 both complete-segregation corners are optimal
    const FirstBest fb = first_best(economy(0.5), 200);
    ASSERT_EQ(fb.ties.size(), 2u);
    EXPECT_EQ(fb.profile, StrategyProfile(0.0, 1.0));
    EXPECT_EQ(fb.ties[1], StrategyProfile(1.0, 0.0));
}

// one Red moves B -> A while one Green moves A -> B, and the reverse
TEST(FirstBest, PairedSwitchDoesNotRaiseWelfare) {
    for (double a : {0.5, 0.6, 0.7, 0.8}) {
        const Model e = economy(a);
        const FirstBest fb = first_best(e, 200);
        for (double eps : {1e-4, -1e-4}) {
            const StrategyProfile moved{fb.profile.mu_R() + eps, fb.profile.mu_G() - eps};
            if (moved == fb.profile || Model::is_singular(moved)) continue;
            EXPECT_LE(welfare(moved, e), fb.welfare + 1e-14) << "alpha=" << a << " eps=" << eps;
        }
    }
}

TEST(FirstBest, NeverBothInteriorUnderConcavity) {
    test::ProfileGen gen(55);
    int checked = 0;
    for (int i = 0; i < 12; ++i) {
        const double c0 = 2.0 + 10.0 * gen.uniform();
        const double pk = 1.0 + 6.0 * gen.uniform();
        const double lam = 2.0 * (1 + c0) * gen.uniform();
        const double alpha = 0.5 + 0.4 * gen.uniform();
        const ModelParams m = ModelParams::from_products(c0, pk, lam, 80000, alpha, 1e-4);
        if (!concavity_condition(m)) continue;
        ++checked;
        const FirstBest fb = first_best(Model(m), 200);
        const bool interior = fb.profile.mu_R() > 0 && fb.profile.mu_R() < 1 && fb.profile.mu_G() > 0 &&
                              fb.profile.mu_G() < 1;
        EXPECT_FALSE(interior) << "c0=" << c0 << " pk=" << pk << " lam=" << lam << " alpha=" << alpha;
    }
    EXPECT_GT(checked, 5);
}

TEST(SecondBest, KnownValues) {
    struct Row {
        double alpha, mu_star, mu_S, I;
    };
    // independent reference values
    const Row rows[] = {{0.5, 0.0, 0.5, -0.0114}, {0.6, 0.0367, 0.6455, -0.0060},
                        {0.7, 0.42120, 0.83665, -0.0150}, {0.8, 0.95014, 0.97675, -0.0022}};
    for (const Row& r : rows) {
        const SecondBest sb = second_best(economy(r.alpha));
        EXPECT_NEAR(sb.laissez_faire.mu_G(), r.mu_star, 1e-4) << r.alpha;
        EXPECT_NEAR(sb.mu_S, r.mu_S, 1e-4) << r.alpha;
        EXPECT_NEAR(sb.integration_gain(), r.I, 1e-4) << r.alpha;
        EXPECT_FALSE(sb.multiple_symmetric_roots);
    }
}

TEST(SecondBest, MaximinSign) {
    EXPECT_GT(maximin_gain(economy(0.6)), 0.0);
    EXPECT_LT(maximin_gain(economy(0.5)), 0.0);
    EXPECT_LT(integration_gain(economy(0.95)), 0.0);
}

TEST(WelfareReport, Fields) {
    const WelfareReport r = welfare_report(economy(0.7), 200);
    EXPECT_TRUE(r.concavity_condition_holds);
    EXPECT_EQ(r.W_value, welfare(r.second.laissez_faire, economy(0.7)));
    EXPECT_LT(r.integration_gain_I, 0.0);
    EXPECT_EQ(r.first_best_kind, EquilibriumKind::PartialSegregation);
}
