#pragma once

// First-best planner optimum, the concavity condition that forces it onto
// the boundary, and the second-best comparison between stabilized
// integration and the laissez-faire equilibrium.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "segnet/equilibrium.hpp"
#include "segnet/parallel.hpp"
#include "segnet/welfare_function.hpp"

namespace segnet {

/// Utilitarian welfare at a profile. Throws SingularSupply at (0,0) and (1,1).
template <class E>
double welfare(const StrategyProfile& mu, const E& econ) {
    return welfare_value(econ, mu);
}

/// Welfare of the worst-off worker among those actually present.
template <class E>
double worst_off_payoff(const StrategyProfile& mu, const E& econ) {
    const MarketState st = econ.market_state(mu);
    double w = std::numeric_limits<double>::infinity();
    if (mu.mu_R() > 0.0) w = std::min(w, st.Pi_AR);
    if (mu.mu_R() < 1.0) w = std::min(w, st.Pi_BR);
    if (mu.mu_G() > 0.0) w = std::min(w, st.Pi_AG);
    if (mu.mu_G() < 1.0) w = std::min(w, st.Pi_BG);
    return w;
}

/// s''(x) > -(4 / lambda) s'(x) on a grid of [0, x_max]. `s` needs
/// derivative() and second_derivative().
template <class S>
bool concavity_holds(const S& s, double lambda, double x_max, double spacing = 1e-3) {
    const auto n = static_cast<long>(std::ceil(x_max / spacing));
    for (long i = 0; i <= n; ++i) {
        const double x = std::min(x_max, static_cast<double>(i) * spacing);
        if (!(s.second_derivative(x) > -(4.0 / lambda) * s.derivative(x))) return false;
    }
    return true;
}

/// For the rate-form employment function the inequality reduces to
/// c1 lambda < 2 (1 + c0 + c1 x), tightest at x = 0.
inline bool concavity_condition(const ModelParams& m) {
    return concavity_holds(EmploymentFunction{m.c0, m.c1}, m.lambda,
                           0.5 * (m.p + m.kappa + m.lambda));
}

inline EquilibriumKind segregation_kind(const StrategyProfile& mu) {
    return classify_profile(mu);
}

struct FirstBest {
    StrategyProfile profile;   ///< lexicographically smallest maximizer
    double welfare = 0.0;
    EquilibriumKind kind = EquilibriumKind::Other;
    std::vector<StrategyProfile> ties;
};

namespace detail {

/// Compass search on the closed square, starting step h, down to min_step.
template <class E>
StrategyProfile polish_max(const E& econ, StrategyProfile mu, double h, double min_step) {
    auto W = [&](const StrategyProfile& x) {
        if (E::is_singular(x)) return -std::numeric_limits<double>::infinity();
        return welfare_value(econ, x);
    };
    double best = W(mu);
    while (h >= min_step) {
        bool moved = false;
        const StrategyProfile trial[4] = {{mu.mu_R() + h, mu.mu_G()},
                                          {mu.mu_R() - h, mu.mu_G()},
                                          {mu.mu_R(), mu.mu_G() + h},
                                          {mu.mu_R(), mu.mu_G() - h}};
        for (const auto& t : trial) {
            if (t == mu) continue;
            const double w = W(t);
            if (w > best) {
                best = w;
                mu = t;
                moved = true;
                break;
            }
        }
        if (!moved) h *= 0.5;
    }
    return mu;
}

} // namespace detail

/// Grid maximization of welfare over [0,1]^2 followed by compass refinement
/// to 1e-8. Grid points within tie_tol of the best are refined as well, and
/// every refined point within tie_tol of the overall best is reported.
template <class E>
FirstBest first_best(const E& econ, int grid_n = 200, double tie_tol = 1e-10) {
    if (grid_n < 200) throw DomainError("grid_n must be at least 200");
    const std::size_t n = static_cast<std::size_t>(grid_n);
    std::vector<double> W((n + 1) * (n + 1));
    parallel_for(n + 1, [&](std::size_t i) {
        for (std::size_t j = 0; j <= n; ++j) {
            const StrategyProfile mu{double(i) / n, double(j) / n};
            W[i * (n + 1) + j] = E::is_singular(mu) ? -std::numeric_limits<double>::infinity()
                                                    : welfare_value(econ, mu);
        }
    });
    const double wmax = *std::max_element(W.begin(), W.end());

    // local maxima of the grid that are close to the top become refinement seeds
    std::vector<StrategyProfile> seeds;
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
            const double w = W[i * (n + 1) + j];
            if (w < wmax - std::max(1e-6 * std::abs(wmax), tie_tol)) continue;
            bool local = true;
            for (int di = -1; di <= 1 && local; ++di)
                for (int dj = -1; dj <= 1 && local; ++dj) {
                    const long ii = long(i) + di, jj = long(j) + dj;
                    if (ii < 0 || jj < 0 || ii > long(n) || jj > long(n)) continue;
                    if (W[std::size_t(ii) * (n + 1) + std::size_t(jj)] > w) local = false;
                }
            if (local) seeds.emplace_back(double(i) / n, double(j) / n);
        }
    }

    std::vector<StrategyProfile> refined(seeds.size());
    std::vector<double> refined_w(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t k) {
        refined[k] = detail::polish_max(econ, seeds[k], 1.0 / n, 1e-8);
        refined_w[k] = welfare_value(econ, refined[k]);
    });
    const double best = *std::max_element(refined_w.begin(), refined_w.end());

    FirstBest out;
    out.welfare = best;
    for (std::size_t k = 0; k < refined.size(); ++k) {
        if (refined_w[k] < best - tie_tol) continue;
        const bool dup = std::any_of(out.ties.begin(), out.ties.end(), [&](const StrategyProfile& t) {
            return std::abs(t.mu_R() - refined[k].mu_R()) <= 1e-7 &&
                   std::abs(t.mu_G() - refined[k].mu_G()) <= 1e-7;
        });
        if (!dup) out.ties.push_back(refined[k]);
    }
    std::sort(out.ties.begin(), out.ties.end());
    out.profile = out.ties.front();
    out.kind = segregation_kind(out.profile);
    return out;
}

/// Laissez-faire equilibrium with Reds in A: (1, mu*), mu* = 0 in the complete regime.
template <class E>
StrategyProfile laissez_faire_equilibrium(const E& econ) {
    if (classify_regime(econ) == Regime::Complete) return {1.0, 0.0};
    return {1.0, solve_partial(econ).mu_star};
}

struct SecondBest {
    StrategyProfile laissez_faire;
    double mu_S = 0.0;
    bool multiple_symmetric_roots = false;
    double welfare_integrated = 0.0;
    double welfare_segregated = 0.0;
    double worst_integrated = 0.0;
    double worst_segregated = 0.0;

    /// W(mu_S, mu_S) / W(1, mu*) - 1
    double integration_gain() const { return welfare_integrated / welfare_segregated - 1.0; }
    /// Worst-off payoff ratio minus one.
    double maximin_gain() const { return worst_integrated / worst_segregated - 1.0; }
};

template <class E>
SecondBest second_best(const E& econ) {
    SecondBest sb;
    sb.laissez_faire = laissez_faire_equilibrium(econ);
    const SymmetricSolution sym = solve_symmetric(econ);
    sb.mu_S = sym.mu_S;
    sb.multiple_symmetric_roots = sym.multiple();
    const StrategyProfile integrated{sym.mu_S, sym.mu_S};
    sb.welfare_integrated = welfare_value(econ, integrated);
    sb.welfare_segregated = welfare_value(econ, sb.laissez_faire);
    sb.worst_integrated = worst_off_payoff(integrated, econ);
    sb.worst_segregated = worst_off_payoff(sb.laissez_faire, econ);
    return sb;
}

template <class E>
double integration_gain(const E& econ) {
    return second_best(econ).integration_gain();
}

template <class E>
double maximin_gain(const E& econ) {
    return second_best(econ).maximin_gain();
}

struct WelfareReport {
    double W_value = 0.0;
    StrategyProfile first_best_profile;
    EquilibriumKind first_best_kind = EquilibriumKind::Other;
    bool concavity_condition_holds = false;
    double integration_gain_I = 0.0;
    double maximin_gain = 0.0;
    SecondBest second;
};

/// W_value is welfare at the laissez-faire equilibrium.
template <class E>
WelfareReport welfare_report(const E& econ, int grid_n = 200) {
    WelfareReport r;
    r.second = second_best(econ);
    r.W_value = r.second.welfare_segregated;
    const FirstBest fb = first_best(econ, grid_n);
    r.first_best_profile = fb.profile;
    r.first_best_kind = fb.kind;
    r.concavity_condition_holds = concavity_condition(econ.params());
    r.integration_gain_I = r.second.integration_gain();
    r.maximin_gain = r.second.maximin_gain();
    return r;
}

} // namespace segnet
