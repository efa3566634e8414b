#pragma once

// Checks of the two uniqueness assumptions. Nothing in the solvers depends on
// them; bounded utilities such as CARA fail the first one by construction.

#include <cmath>
#include <vector>

#include "segnet/model.hpp"

namespace segnet {

struct WageLimitCheck {
    /// U(w_A(x, x)) and U(w_B(1 - x, 1 - x)) for x = 1e-2, 1e-3, ..., 1e-12.
    std::vector<double> utility_A;
    std::vector<double> utility_B;
    /// Both sequences keep growing by at least half their first decade step,
    /// i.e. they show no sign of levelling off.
    bool holds = false;
};

/// Scarce labor drives utility to infinity: U(w_A(x,x)) -> inf as x -> 0, and
/// likewise for B. Checked on a decade ladder.
template <class E>
WageLimitCheck check_wage_limit(const E& econ) {
    WageLimitCheck out;
    for (int k = 2; k <= 12; ++k) {
        const double x = std::pow(10.0, -k);
        out.utility_A.push_back(econ.utility(econ.market_state({x, x}).w_A));
        out.utility_B.push_back(econ.utility(econ.market_state({1.0 - x, 1.0 - x}).w_B));
    }
    auto unbounded = [](const std::vector<double>& u) {
        const double first = u[1] - u[0];
        const double last = u.back() - u[u.size() - 2];
        return first > 0.0 && last >= 0.5 * first;
    };
    out.holds = unbounded(out.utility_A) && unbounded(out.utility_B);
    return out;
}

struct EmploymentElasticityCheck {
    long points = 0;
    long violations = 0;
    /// Largest ratio of employment elasticity to utility elasticity seen.
    double worst_ratio = 0.0;
    bool holds() const { return violations == 0; }
};

/// Own-group employment responds less to mu_X than utility does:
/// |d ln s_A^X / d mu_X| < |d ln U / d ln w_A| |d ln w_A / d mu_X| and the same
/// for B, on a grid_n x grid_n interior grid with central differences.
template <class E>
EmploymentElasticityCheck check_employment_elasticity(const E& econ, int grid_n = 40,
                                                      double h = 1e-6) {
    EmploymentElasticityCheck out;
    const auto& U = econ.utility_function();
    for (int i = 1; i < grid_n; ++i) {
        for (int j = 1; j < grid_n; ++j) {
            const double m[2] = {double(i) / grid_n, double(j) / grid_n};
            const MarketState st = econ.market_state({m[0], m[1]});
            for (int x = 0; x < 2; ++x) {
                auto at = [&](double d) {
                    return x == 0 ? StrategyProfile{m[0] + d, m[1]} : StrategyProfile{m[0], m[1] + d};
                };
                const MarketState up = econ.market_state(at(h));
                const MarketState dn = econ.market_state(at(-h));
                const double sA = x == 0 ? st.s_AR : st.s_AG;
                const double sB = x == 0 ? st.s_BR : st.s_BG;
                const double dsA = ((x == 0 ? up.s_AR : up.s_AG) - (x == 0 ? dn.s_AR : dn.s_AG)) / (2 * h);
                const double dsB = ((x == 0 ? up.s_BR : up.s_BG) - (x == 0 ? dn.s_BR : dn.s_BG)) / (2 * h);
                const double dwA = (up.w_A - dn.w_A) / (2 * h);
                const double dwB = (up.w_B - dn.w_B) / (2 * h);
                const double lhs[2] = {std::abs(dsA / sA), std::abs(dsB / sB)};
                const double rhs[2] = {std::abs(U.derivative(st.w_A) / U(st.w_A) * dwA),
                                       std::abs(U.derivative(st.w_B) / U(st.w_B) * dwB)};
                for (int k = 0; k < 2; ++k) {
                    ++out.points;
                    if (!(lhs[k] < rhs[k])) ++out.violations;
                    if (rhs[k] > 0.0) out.worst_ratio = std::max(out.worst_ratio, lhs[k] / rhs[k]);
                }
            }
        }
    }
    return out;
}

} // namespace segnet
