#pragma once

// Closed-form objects of the occupational-segregation model: tie probabilities,
// the employment function, group employment rates, effective labor supplies,
// marginal-product wages, utility and expected payoffs.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <string>

#include "segnet/error.hpp"

namespace segnet {

enum class Group { Red, Green };
enum class Education { A, B };

/// Structural parameters.
///
/// Only the products c1*(p+kappa) and c1*lambda enter the reduced form. A
/// parameter set built from products stores c1 = 1 and folds the products into
/// (p + kappa) and lambda; such a set has `explicit_split == false` and its
/// p/kappa/lambda are rates rather than probabilities.
struct ModelParams {
    double p = 0.0;
    double kappa = 0.0;
    double lambda = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double theta = 0.0;
    double alpha = 0.5;
    double rho = 0.0;
    bool explicit_split = true;

    static ModelParams from_split(double p, double kappa, double lambda, double c0, double c1,
                                  double theta, double alpha, double rho) {
        ModelParams m{p, kappa, lambda, c0, c1, theta, alpha, rho, true};
        m.validate();
        return m;
    }

    static ModelParams from_products(double c0, double c1_pk, double c1_lambda, double theta,
                                     double alpha, double rho) {
        ModelParams m{c1_pk, 0.0, c1_lambda, c0, 1.0, theta, alpha, rho, false};
        m.validate();
        return m;
    }

    /// c1 * (p + kappa)
    double c1_pk() const { return c1 * (p + kappa); }
    /// c1 * lambda
    double c1_lambda() const { return c1 * lambda; }
    /// Employment probability with no same-education friends.
    double s0() const { return c0 / (1.0 + c0); }

    /// Same parameters in product form (c1 = 1).
    ModelParams normalized() const {
        return from_products(c0, c1_pk(), c1_lambda(), theta, alpha, rho);
    }

    void validate() const {
        auto finite = [](double v) { return std::isfinite(v); };
        if (!(finite(p) && finite(kappa) && finite(lambda) && finite(c0) && finite(c1) &&
              finite(theta) && finite(alpha) && finite(rho)))
            throw InvalidParams("parameters must be finite");
        if (p < 0.0) throw InvalidParams("p must be >= 0");
        if (kappa < 0.0) throw InvalidParams("kappa must be >= 0");
        if (!(lambda > 0.0)) throw InvalidParams("lambda must be > 0");
        if (!(c0 > 0.0)) throw InvalidParams("c0 must be > 0");
        if (c1 < 0.0) throw InvalidParams("c1 must be >= 0");
        if (!(theta > 0.0)) throw InvalidParams("theta must be > 0");
        if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParams("alpha must lie in (0,1)");
        if (!(rho > 0.0)) throw InvalidParams("rho must be > 0");
        if (explicit_split && p + kappa + lambda > 1.0 + 1e-12)
            throw InvalidParams("p + kappa + lambda must not exceed 1");
    }

    bool operator==(const ModelParams&) const = default;
};

/// Probability that two workers form a tie.
inline double tie_probability(bool same_group, bool same_education, const ModelParams& m) {
    double prob = m.p;
    if (same_group) prob += m.lambda;
    if (same_education) prob += m.kappa;
    return prob;
}

/// Shares of Reds and Greens choosing education A.
class StrategyProfile {
public:
    StrategyProfile() = default;
    StrategyProfile(double mu_R, double mu_G)
        : mu_R_(std::clamp(mu_R, 0.0, 1.0)), mu_G_(std::clamp(mu_G, 0.0, 1.0)) {}

    double mu_R() const { return mu_R_; }
    double mu_G() const { return mu_G_; }
    double mu(Group g) const { return g == Group::Red ? mu_R_ : mu_G_; }
    double mu_bar() const { return 0.5 * (mu_R_ + mu_G_); }
    StrategyProfile swapped() const { return {mu_G_, mu_R_}; }

    bool operator==(const StrategyProfile&) const = default;
    auto operator<=>(const StrategyProfile&) const = default;

private:
    double mu_R_ = 0.0;
    double mu_G_ = 0.0;
};

/// s(x) = (c0 + c1 x) / (1 + c0 + c1 x): stationary employment of a two-state
/// chain that loses its job at rate 1 and finds one at rate c0 + c1 x.
struct EmploymentFunction {
    double c0;
    double c1;

    double operator()(double x) const {
        if (x < 0.0) throw DomainError("friend measure must be non-negative");
        const double c = c0 + c1 * x;
        return c / (1.0 + c);
    }
    double derivative(double x) const {
        const double d = 1.0 + c0 + c1 * x;
        return c1 / (d * d);
    }
    double second_derivative(double x) const {
        const double d = 1.0 + c0 + c1 * x;
        return -2.0 * c1 * c1 / (d * d * d);
    }
};

template <class P>
concept ProductionFunction = requires(const P& f, double la, double lb) {
    { f.output(la, lb) } -> std::convertible_to<double>;
    { f.wage_a(la, lb) } -> std::convertible_to<double>;
    { f.wage_b(la, lb) } -> std::convertible_to<double>;
};

template <class U>
concept UtilityFunction = requires(const U& u, double w) {
    { u(w) } -> std::convertible_to<double>;
    { u.derivative(w) } -> std::convertible_to<double>;
};

/// F(L_A, L_B) = theta L_A^alpha L_B^(1-alpha)
struct CobbDouglas {
    double theta;
    double alpha;

    double output(double la, double lb) const {
        return theta * std::pow(la, alpha) * std::pow(lb, 1.0 - alpha);
    }
    double wage_a(double la, double lb) const {
        return theta * alpha * std::pow(lb / la, 1.0 - alpha);
    }
    double wage_b(double la, double lb) const {
        return theta * (1.0 - alpha) * std::pow(la / lb, alpha);
    }
};

/// Constant absolute risk aversion, U(w) = 1 - exp(-rho w).
struct CaraUtility {
    double rho;

    double operator()(double w) const {
        if (w < 0.0) throw DomainError("wage must be non-negative");
        return -std::expm1(-rho * w);
    }
    double derivative(double w) const { return rho * std::exp(-rho * w); }
};

struct EmploymentRates {
    double s_AR = 0.0;
    double s_AG = 0.0;
    double s_BR = 0.0;
    double s_BG = 0.0;

    bool operator==(const EmploymentRates&) const = default;
};

struct LaborSupplies {
    double L_A = 0.0;
    double L_B = 0.0;
};

struct Wages {
    double w_A = 0.0;
    double w_B = 0.0;
};

/// Everything derived from a profile.
struct MarketState {
    double s_AR = 0.0, s_AG = 0.0, s_BR = 0.0, s_BG = 0.0;
    double L_A = 0.0, L_B = 0.0;
    double w_A = 0.0, w_B = 0.0;
    double Pi_AR = 0.0, Pi_AG = 0.0, Pi_BR = 0.0, Pi_BG = 0.0;
    double dPi_R = 0.0, dPi_G = 0.0;

    double payoff_gap(Group g) const { return g == Group::Red ? dPi_R : dPi_G; }

    bool operator==(const MarketState&) const = default;
};

struct PayoffGaps {
    double R = 0.0;
    double G = 0.0;

    double operator[](Group g) const { return g == Group::Red ? R : G; }
};

/// The model with pluggable production and utility.
template <ProductionFunction Production = CobbDouglas, UtilityFunction Utility = CaraUtility>
class Economy {
public:
    using production_type = Production;
    using utility_type = Utility;

    Economy(const ModelParams& params, Production production, Utility utility)
        : params_(params), production_(production), utility_(utility) {
        params_.validate();
    }

    explicit Economy(const ModelParams& params)
        requires(std::same_as<Production, CobbDouglas> && std::same_as<Utility, CaraUtility>)
        : Economy(params, CobbDouglas{params.theta, params.alpha}, CaraUtility{params.rho}) {}

    const ModelParams& params() const { return params_; }
    const Production& production() const { return production_; }
    const Utility& utility_function() const { return utility_; }

    EmploymentFunction employment_function() const { return {params_.c0, params_.c1}; }
    double employment(double x) const { return employment_function()(x); }

    /// s((p + kappa + lambda) / 2), employment of the specialized group at complete segregation.
    double s_high() const { return employment(0.5 * (params_.p + params_.kappa + params_.lambda)); }
    /// s((p + kappa) / 2)
    double s_low() const { return employment(0.5 * (params_.p + params_.kappa)); }

    EmploymentRates rates(const StrategyProfile& mu) const {
        const double pk = params_.p + params_.kappa;
        const double lam = params_.lambda;
        const double mb = mu.mu_bar();
        return {employment(pk * mb + lam * mu.mu_R() / 2.0),
                employment(pk * mb + lam * mu.mu_G() / 2.0),
                employment(pk * (1.0 - mb) + lam * (1.0 - mu.mu_R()) / 2.0),
                employment(pk * (1.0 - mb) + lam * (1.0 - mu.mu_G()) / 2.0)};
    }

    LaborSupplies supplies(const StrategyProfile& mu) const { return supplies(mu, rates(mu)); }

    static LaborSupplies supplies(const StrategyProfile& mu, const EmploymentRates& s) {
        return {mu.mu_R() * s.s_AR / 2.0 + mu.mu_G() * s.s_AG / 2.0,
                (1.0 - mu.mu_R()) * s.s_BR / 2.0 + (1.0 - mu.mu_G()) * s.s_BG / 2.0};
    }

    Wages wages(double la, double lb) const {
        if (!(la > 0.0) || !(lb > 0.0))
            throw SingularSupply("wages undefined: an effective labor supply is zero");
        return {production_.wage_a(la, lb), production_.wage_b(la, lb)};
    }

    double utility(double w) const { return utility_(w); }

    /// Supplies vanish only at (0,0) and (1,1).
    static bool is_singular(const StrategyProfile& mu) {
        return (mu.mu_R() == 0.0 && mu.mu_G() == 0.0) || (mu.mu_R() == 1.0 && mu.mu_G() == 1.0);
    }

    MarketState market_state(const StrategyProfile& mu) const {
        MarketState st;
        const EmploymentRates s = rates(mu);
        const LaborSupplies L = supplies(mu, s);
        const Wages w = wages(L.L_A, L.L_B);
        const double uA = utility(w.w_A);
        const double uB = utility(w.w_B);
        st.s_AR = s.s_AR;
        st.s_AG = s.s_AG;
        st.s_BR = s.s_BR;
        st.s_BG = s.s_BG;
        st.L_A = L.L_A;
        st.L_B = L.L_B;
        st.w_A = w.w_A;
        st.w_B = w.w_B;
        st.Pi_AR = s.s_AR * uA;
        st.Pi_AG = s.s_AG * uA;
        st.Pi_BR = s.s_BR * uB;
        st.Pi_BG = s.s_BG * uB;
        st.dPi_R = st.Pi_AR - st.Pi_BR;
        st.dPi_G = st.Pi_AG - st.Pi_BG;
        return st;
    }

    PayoffGaps payoff_gaps(const StrategyProfile& mu) const {
        const MarketState st = market_state(mu);
        return {st.dPi_R, st.dPi_G};
    }

    /// G = 1 - w_B / w_A
    double wage_gap(const StrategyProfile& mu) const {
        const MarketState st = market_state(mu);
        return 1.0 - st.w_B / st.w_A;
    }

private:
    ModelParams params_;
    Production production_;
    Utility utility_;
};

using Model = Economy<>;

inline double employment_prob(double x, const ModelParams& m) {
    return EmploymentFunction{m.c0, m.c1}(x);
}

inline EmploymentRates group_employment_rates(const StrategyProfile& mu, const ModelParams& m) {
    return Model(m).rates(mu);
}

inline LaborSupplies labor_supplies(const StrategyProfile& mu, const ModelParams& m) {
    return Model(m).supplies(mu);
}

inline Wages wages(double la, double lb, const ModelParams& m) { return Model(m).wages(la, lb); }

inline double utility(double w, const ModelParams& m) { return CaraUtility{m.rho}(w); }

inline MarketState market_state(const StrategyProfile& mu, const ModelParams& m) {
    return Model(m).market_state(mu);
}

inline double wage_gap(const StrategyProfile& mu, const ModelParams& m) {
    return Model(m).wage_gap(mu);
}

inline std::string to_string(Group g) { return g == Group::Red ? "R" : "G"; }

} // namespace segnet
