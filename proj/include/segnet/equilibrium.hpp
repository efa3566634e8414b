#pragma once

// Equilibria of the education-choice game: verification, regime
// classification, edge and symmetric solvers, stability, adjustment
// dynamics and exhaustive enumeration.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "segnet/model.hpp"
#include "segnet/parallel.hpp"
#include "segnet/roots.hpp"
#include "segnet/welfare_function.hpp"

namespace segnet {

inline constexpr double kEquilibriumTol = 1e-9;
/// Strictness margin for boundary coordinates.
inline constexpr double kBoundaryTol = 1e-10;
/// Inward offset used to evaluate limits at the singular corners.
inline constexpr double kSingularProbe = 1e-9;

enum class EquilibriumKind { CompleteSegregation, PartialSegregation, SymmetricInterior, Corner, Other };
enum class Stability { Stable, Unstable, BoundaryStable };
enum class Regime { Complete, Partial };

inline std::string to_string(EquilibriumKind k) {
    switch (k) {
    case EquilibriumKind::CompleteSegregation: return "CompleteSegregation";
    case EquilibriumKind::PartialSegregation: return "PartialSegregation";
    case EquilibriumKind::SymmetricInterior: return "SymmetricInterior";
    case EquilibriumKind::Corner: return "Corner";
    case EquilibriumKind::Other: return "Other";
    }
    return "Other";
}

inline std::string to_string(Stability s) {
    switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::BoundaryStable: return "boundary-stable";
    }
    return "unstable";
}

inline std::string to_string(Regime r) { return r == Regime::Complete ? "complete" : "partial"; }

inline bool is_boundary(double mu) { return mu == 0.0 || mu == 1.0; }

inline EquilibriumKind classify_profile(const StrategyProfile& mu, double sym_tol = 1e-9) {
    const bool bR = is_boundary(mu.mu_R());
    const bool bG = is_boundary(mu.mu_G());
    if (bR && bG) {
        return mu.mu_R() != mu.mu_G() ? EquilibriumKind::CompleteSegregation : EquilibriumKind::Corner;
    }
    if (bR || bG) return EquilibriumKind::PartialSegregation;
    if (std::abs(mu.mu_R() - mu.mu_G()) <= sym_tol) return EquilibriumKind::SymmetricInterior;
    return EquilibriumKind::Other;
}

/// Point at which to evaluate the model; the singular corners are replaced
/// by a probe just inside the square.
inline StrategyProfile evaluation_point(const StrategyProfile& mu) {
    if (mu.mu_R() == 0.0 && mu.mu_G() == 0.0) return {kSingularProbe, kSingularProbe};
    if (mu.mu_R() == 1.0 && mu.mu_G() == 1.0) return {1.0 - kSingularProbe, 1.0 - kSingularProbe};
    return mu;
}

template <class E>
PayoffGaps gaps_at(const E& econ, const StrategyProfile& mu) {
    return econ.payoff_gaps(evaluation_point(mu));
}

template <class E>
MarketState market_at(const E& econ, const StrategyProfile& mu) {
    return econ.market_state(evaluation_point(mu));
}

struct ConditionVerdict {
    bool R = false;
    bool G = false;
    double gap_R = 0.0;
    double gap_G = 0.0;

    bool holds() const { return R && G; }
};

/// Equilibrium conditions per group: gap <= 0 at mu = 0, gap = 0 inside, gap >= 0 at mu = 1.
template <class E>
ConditionVerdict check_equilibrium(const StrategyProfile& mu, const E& econ,
                                   double tol = kEquilibriumTol) {
    const PayoffGaps g = gaps_at(econ, mu);
    auto ok = [tol](double m, double gap) {
        if (m == 0.0) return gap <= tol;
        if (m == 1.0) return gap >= -tol;
        return std::abs(gap) <= tol;
    };
    return {ok(mu.mu_R(), g.R), ok(mu.mu_G(), g.G), g.R, g.G};
}

/// Ratio U(w_A(1,0)) / U(w_B(1,0)) and the network bound s_H / s_L it is compared with.
struct RegimeMargin {
    double utility_ratio;
    double employment_ratio;
};

template <class E>
RegimeMargin regime_margin(const E& econ) {
    const MarketState st = econ.market_state({1.0, 0.0});
    if (st.w_A < st.w_B * (1.0 - 1e-12))
        throw RelabelRequired("w_A(1,0) < w_B(1,0): occupation A is the bad job; swap labels");
    return {econ.utility(st.w_A) / econ.utility(st.w_B), econ.s_high() / econ.s_low()};
}

template <class E>
Regime classify_regime(const E& econ) {
    const RegimeMargin m = regime_margin(econ);
    return m.utility_ratio <= m.employment_ratio ? Regime::Complete : Regime::Partial;
}

/// Payoff scale used to make root tolerances relative.
template <class E>
double payoff_scale(const E& econ) {
    const MarketState st = econ.market_state({1.0, 0.0});
    return std::max({std::abs(st.Pi_AR), std::abs(st.Pi_BG), 1e-300});
}

struct EdgeSolution {
    double mu_star = 0.0;
    /// All roots of the gap along the edge; more than one signals the
    /// non-monotone case and is reported rather than assumed away.
    std::vector<double> roots;
};

/// Mixing share of Greens when all Reds choose A: root of dPi_G(1, mu) on [0, 1 - 1e-9].
template <class E>
EdgeSolution solve_partial(const E& econ, double tol = 1e-10) {
    const double scale = payoff_scale(econ);
    auto f = [&](double m) { return econ.payoff_gaps({1.0, m}).G; };
    roots::RootOptions opt;
    opt.f_tol = tol * scale;
    auto rs = roots::find_all_roots(f, 0.0, 1.0 - 1e-9, 1e-3, opt);
    if (rs.empty()) throw NoRoot("dPi_G(1, mu) has no sign change on [0,1): complete-segregation regime");
    return {rs.front(), rs};
}

/// lambda / (2 (p + kappa + lambda)): position of mu_hat relative to this
/// decides the sign of the equilibrium wage gap along the (1, mu) edge.
inline double mu_hat_threshold(const ModelParams& m) {
    return m.lambda / (2.0 * (m.p + m.kappa + m.lambda));
}

/// Share of Greens in A at which w_A(1, mu) = w_B(1, mu).
template <class E>
double find_mu_hat(const E& econ, double tol = 1e-12) {
    const double theta = std::max(econ.params().theta, 1e-300);
    auto f = [&](double m) {
        const MarketState st = econ.market_state({1.0, m});
        return (st.w_A - st.w_B) / theta;
    };
    roots::RootOptions opt;
    opt.f_tol = tol;
    auto rs = roots::find_all_roots(f, 0.0, 1.0 - 1e-9, 1e-3, opt);
    if (rs.empty()) throw NoRoot("w_A(1, mu) and w_B(1, mu) never cross");
    return rs.front();
}

struct SymmetricSolution {
    double mu_S = 0.0;
    std::vector<double> roots;
    bool multiple() const { return roots.size() > 1; }
};

/// Symmetric profile (mu, mu) with dPi = 0. When several roots exist the one
/// with the highest utilitarian welfare is returned.
template <class E>
SymmetricSolution solve_symmetric(const E& econ, double tol = 1e-10) {
    const double scale = payoff_scale(econ);
    auto f = [&](double m) { return gaps_at(econ, {m, m}).R; };
    roots::RootOptions opt;
    opt.f_tol = tol * scale;
    std::vector<double> rs;
    for (double r : roots::find_all_roots(f, 0.0, 1.0, 1e-3, opt))
        if (r > 0.0 && r < 1.0) rs.push_back(r);
    if (rs.empty()) throw NoRoot("no symmetric equilibrium found");
    double best = rs.front();
    double best_w = welfare_value(econ, {best, best});
    for (double r : rs) {
        const double w = welfare_value(econ, {r, r});
        if (w > best_w) {
            best = r;
            best_w = w;
        }
    }
    return {best, rs};
}

/// d dPi^X / d mu_Y, rows X = (R, G), columns Y = (R, G).
struct Jacobian {
    std::array<std::array<double, 2>, 2> d{};
    double det() const { return d[0][0] * d[1][1] - d[0][1] * d[1][0]; }
};

/// Finite-difference Jacobian of (dPi_R, dPi_G); one-sided at the boundary.
template <class E>
Jacobian payoff_gap_jacobian(const E& econ, const StrategyProfile& mu, double h = 1e-6) {
    Jacobian J;
    for (int col = 0; col < 2; ++col) {
        const double x = col == 0 ? mu.mu_R() : mu.mu_G();
        const double up = std::min(1.0, x + h);
        const double dn = std::max(0.0, x - h);
        auto at = [&](double v) {
            return col == 0 ? StrategyProfile{v, mu.mu_G()} : StrategyProfile{mu.mu_R(), v};
        };
        const PayoffGaps gu = gaps_at(econ, at(up));
        const PayoffGaps gd = gaps_at(econ, at(dn));
        J.d[0][col] = (gu.R - gd.R) / (up - dn);
        J.d[1][col] = (gu.G - gd.G) / (up - dn);
    }
    return J;
}

struct StabilityResult {
    Stability verdict = Stability::Unstable;
    Jacobian jacobian;
};

/// Interior coordinates need a negative own derivative (and a positive
/// determinant when both are interior); boundary coordinates need the gap
/// strictly on the right side. A boundary gap within the margin makes the
/// verdict boundary-stable.
template <class E>
StabilityResult stability(const StrategyProfile& mu, const E& econ, double h = 1e-6,
                          double tol = kEquilibriumTol) {
    StabilityResult out;
    out.jacobian = payoff_gap_jacobian(econ, mu, h);
    const ConditionVerdict cond = check_equilibrium(mu, econ, tol);
    if (!cond.holds()) return out;

    bool ok = true;
    bool marginal = false;
    const std::array<double, 2> m{mu.mu_R(), mu.mu_G()};
    const std::array<double, 2> gap{cond.gap_R, cond.gap_G};
    int interior = 0;
    for (int x = 0; x < 2; ++x) {
        if (m[x] == 0.0) {
            if (!(gap[x] < -kBoundaryTol)) marginal = true;
        } else if (m[x] == 1.0) {
            if (!(gap[x] > kBoundaryTol)) marginal = true;
        } else {
            ++interior;
            if (!(out.jacobian.d[x][x] < 0.0)) ok = false;
        }
    }
    if (interior == 2 && !(out.jacobian.det() > 0.0)) ok = false;

    if (!ok) out.verdict = Stability::Unstable;
    else if (marginal) out.verdict = Stability::BoundaryStable;
    else out.verdict = Stability::Stable;
    return out;
}

struct EquilibriumReport {
    StrategyProfile profile;
    EquilibriumKind kind = EquilibriumKind::Other;
    bool satisfies_conditions = false;
    Stability stable = Stability::Unstable;
    Jacobian jacobian;
    double det_jacobian = 0.0;
    MarketState market;
};

template <class E>
EquilibriumReport make_report(const StrategyProfile& mu, const E& econ, double tol = kEquilibriumTol) {
    EquilibriumReport r;
    r.profile = mu;
    r.kind = classify_profile(mu);
    r.satisfies_conditions = check_equilibrium(mu, econ, tol).holds();
    const StabilityResult s = stability(mu, econ, 1e-6, tol);
    r.stable = r.satisfies_conditions ? s.verdict : Stability::Unstable;
    r.jacobian = s.jacobian;
    r.det_jacobian = s.jacobian.det();
    r.market = market_at(econ, mu);
    return r;
}

struct DynamicsOptions {
    double k = 1.0;
    double horizon = 5000.0;
    double step = 0.5;
    /// Converged once every projected payoff gap is below this.
    double tol = 1e-9;
    /// Keep every n-th step in the trace (the terminal point is always kept).
    long record_every = 1;
};

struct DynamicsSample {
    double time;
    StrategyProfile profile;
};

struct DynamicsTrace {
    std::vector<DynamicsSample> samples;
    StrategyProfile terminal;
    bool converged = false;
    long steps = 0;
};

/// Gap with the component that would leave [0,1]^2 removed.
template <class E>
std::array<double, 2> projected_gaps(const E& econ, const StrategyProfile& mu) {
    const PayoffGaps g = gaps_at(econ, mu);
    std::array<double, 2> v{g.R, g.G};
    const std::array<double, 2> m{mu.mu_R(), mu.mu_G()};
    for (int x = 0; x < 2; ++x) {
        if (m[x] <= 0.0 && v[x] < 0.0) v[x] = 0.0;
        if (m[x] >= 1.0 && v[x] > 0.0) v[x] = 0.0;
    }
    return v;
}

/// Integrates d mu_X / dt = k dPi^X with classical RK4, projecting onto the square.
template <class E>
DynamicsTrace simulate_dynamics(const StrategyProfile& start, const E& econ,
                                const DynamicsOptions& opt = {}) {
    if (!(opt.k > 0.0) || !(opt.step > 0.0)) throw DomainError("k and step must be positive");
    DynamicsTrace tr;
    StrategyProfile mu = start;
    double t = 0.0;
    const long max_steps = static_cast<long>(std::ceil(opt.horizon / opt.step));
    const long every = std::max(1L, opt.record_every);
    auto vel = [&](const StrategyProfile& x) {
        auto g = projected_gaps(econ, x);
        return std::array<double, 2>{opt.k * g[0], opt.k * g[1]};
    };
    auto shift = [](const StrategyProfile& x, const std::array<double, 2>& v, double dt) {
        return StrategyProfile{x.mu_R() + dt * v[0], x.mu_G() + dt * v[1]};
    };
    tr.samples.push_back({t, mu});
    for (long n = 0; n < max_steps; ++n) {
        const auto g = projected_gaps(econ, mu);
        if (std::max(std::abs(g[0]), std::abs(g[1])) < opt.tol) {
            tr.converged = true;
            break;
        }
        const double h = opt.step;
        const auto k1 = vel(mu);
        const auto k2 = vel(shift(mu, k1, h / 2));
        const auto k3 = vel(shift(mu, k2, h / 2));
        const auto k4 = vel(shift(mu, k3, h));
        mu = StrategyProfile{mu.mu_R() + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                             mu.mu_G() + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
        t += h;
        ++tr.steps;
        if (tr.steps % every == 0) tr.samples.push_back({t, mu});
    }
    if (!tr.converged) {
        const auto g = projected_gaps(econ, mu);
        tr.converged = std::max(std::abs(g[0]), std::abs(g[1])) < opt.tol;
    }
    if (tr.samples.back().time != t) tr.samples.push_back({t, mu});
    tr.terminal = mu;
    return tr;
}

namespace detail {

inline bool near(const StrategyProfile& a, const StrategyProfile& b, double eps) {
    return std::abs(a.mu_R() - b.mu_R()) <= eps && std::abs(a.mu_G() - b.mu_G()) <= eps;
}

/// Damped Newton on (dPi_R, dPi_G) = 0 restricted to the open square.
template <class E>
std::optional<StrategyProfile> newton_interior(const E& econ, StrategyProfile mu, double tol) {
    for (int it = 0; it < 60; ++it) {
        const PayoffGaps g = econ.payoff_gaps(mu);
        if (std::max(std::abs(g.R), std::abs(g.G)) <= tol * 1e-2) return mu;
        const Jacobian J = payoff_gap_jacobian(econ, mu, 1e-7);
        const double det = J.det();
        if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
        double dR = (J.d[1][1] * g.R - J.d[0][1] * g.G) / det;
        double dG = (-J.d[1][0] * g.R + J.d[0][0] * g.G) / det;
        double step = 1.0;
        StrategyProfile next = mu;
        for (int ls = 0; ls < 30; ++ls, step *= 0.5) {
            const double r = mu.mu_R() - step * dR;
            const double gg = mu.mu_G() - step * dG;
            if (r <= 0.0 || r >= 1.0 || gg <= 0.0 || gg >= 1.0) continue;
            next = StrategyProfile{r, gg};
            const PayoffGaps gn = econ.payoff_gaps(next);
            if (std::max(std::abs(gn.R), std::abs(gn.G)) < std::max(std::abs(g.R), std::abs(g.G)))
                break;
        }
        if (next == mu) return std::nullopt;
        mu = next;
    }
    const PayoffGaps g = econ.payoff_gaps(mu);
    if (std::max(std::abs(g.R), std::abs(g.G)) <= tol) return mu;
    return std::nullopt;
}

} // namespace detail

/// Every equilibrium reachable from the candidate set: the four corners, the
/// four edges (root scans), the diagonal, and a grid_n x grid_n sweep of the
/// interior for cells where both payoff gaps change sign. Reports are sorted
/// lexicographically by profile.
template <class E>
std::vector<EquilibriumReport> enumerate_equilibria(const E& econ, int grid_n = 200,
                                                    double tol = kEquilibriumTol) {
    if (grid_n < 100) throw DomainError("grid_n must be at least 100");
    std::vector<StrategyProfile> cand = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}};
    const double scale = payoff_scale(econ);
    roots::RootOptions opt;
    opt.f_tol = 1e-10 * scale;

    for (double v : {0.0, 1.0}) {
        auto fG = [&](double m) { return gaps_at(econ, {v, m}).G; };
        for (double r : roots::find_all_roots(fG, 0.0, 1.0, 1e-3, opt))
            if (r > 0.0 && r < 1.0) cand.emplace_back(v, r);
        auto fR = [&](double m) { return gaps_at(econ, {m, v}).R; };
        for (double r : roots::find_all_roots(fR, 0.0, 1.0, 1e-3, opt))
            if (r > 0.0 && r < 1.0) cand.emplace_back(r, v);
    }
    try {
        for (double r : solve_symmetric(econ).roots) cand.emplace_back(r, r);
    } catch (const NoRoot&) {
    }

    // interior sweep
    const std::size_t n = static_cast<std::size_t>(grid_n);
    std::vector<PayoffGaps> grid((n + 1) * (n + 1));
    parallel_for(n + 1, [&](std::size_t i) {
        for (std::size_t j = 0; j <= n; ++j)
            grid[i * (n + 1) + j] = gaps_at(econ, {double(i) / n, double(j) / n});
    });
    auto sign_change = [](double a, double b, double c, double d) {
        const double lo = std::min({a, b, c, d});
        const double hi = std::max({a, b, c, d});
        return lo <= 0.0 && hi >= 0.0;
    };
    std::vector<std::vector<StrategyProfile>> found(n);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            const PayoffGaps& a = grid[i * (n + 1) + j];
            const PayoffGaps& b = grid[(i + 1) * (n + 1) + j];
            const PayoffGaps& c = grid[i * (n + 1) + j + 1];
            const PayoffGaps& d = grid[(i + 1) * (n + 1) + j + 1];
            if (!sign_change(a.R, b.R, c.R, d.R) || !sign_change(a.G, b.G, c.G, d.G)) continue;
            const StrategyProfile centre{(i + 0.5) / n, (j + 0.5) / n};
            if (centre.mu_R() <= 0.0 || centre.mu_R() >= 1.0 || centre.mu_G() <= 0.0 ||
                centre.mu_G() >= 1.0)
                continue;
            if (auto r = detail::newton_interior(econ, centre, tol)) found[i].push_back(*r);
        }
    });
    for (const auto& row : found) cand.insert(cand.end(), row.begin(), row.end());

    // earlier candidates come from exact one-dimensional families and win ties
    std::vector<StrategyProfile> uniq;
    for (const auto& c : cand) {
        if (std::none_of(uniq.begin(), uniq.end(),
                         [&](const StrategyProfile& u) { return detail::near(u, c, 1e-7); }))
            uniq.push_back(c);
    }
    std::sort(uniq.begin(), uniq.end());

    std::vector<EquilibriumReport> out;
    for (const auto& c : uniq) {
        if (!check_equilibrium(c, econ, tol).holds()) continue;
        out.push_back(make_report(c, econ, tol));
    }
    return out;
}

} // namespace segnet
