#pragma once

#include <algorithm>
#include <cmath>

#include "segnet/error.hpp"
#include "segnet/model.hpp"

namespace segnet {

/// Utilitarian welfare as the population-weighted sum of expected payoffs.
inline double welfare_from_payoffs(const StrategyProfile& mu, const MarketState& st) {
    return mu.mu_R() * st.Pi_AR / 2.0 + (1.0 - mu.mu_R()) * st.Pi_BR / 2.0 +
           mu.mu_G() * st.Pi_AG / 2.0 + (1.0 - mu.mu_G()) * st.Pi_BG / 2.0;
}

/// The same quantity written through effective supplies: L_A U(F_A) + L_B U(F_B).
template <class E>
double welfare_from_supplies(const E& econ, const MarketState& st) {
    const auto& f = econ.production();
    return st.L_A * econ.utility(f.wage_a(st.L_A, st.L_B)) +
           st.L_B * econ.utility(f.wage_b(st.L_A, st.L_B));
}

struct WelfarePair {
    double by_payoffs;
    double by_supplies;

    double relative_difference() const {
        const double denom = std::max({std::abs(by_payoffs), std::abs(by_supplies), 1e-300});
        return std::abs(by_payoffs - by_supplies) / denom;
    }
};

template <class E>
WelfarePair welfare_pair(const E& econ, const StrategyProfile& mu) {
    const MarketState st = econ.market_state(mu);
    return {welfare_from_payoffs(mu, st), welfare_from_supplies(econ, st)};
}

/// Utilitarian welfare; both formulations are evaluated and must agree to 1e-10 relative.
template <class E>
double welfare_value(const E& econ, const StrategyProfile& mu) {
    const WelfarePair w = welfare_pair(econ, mu);
    if (w.relative_difference() > 1e-10)
        throw ConsistencyError("welfare formulations disagree");
    return w.by_payoffs;
}

} // namespace segnet
