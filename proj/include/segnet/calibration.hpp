#pragma once

// Moment-matching calibration and the Cobb-Douglas share at which complete
// segregation stops being an equilibrium.

#include <cmath>
#include <optional>

#include "segnet/error.hpp"
#include "segnet/model.hpp"
#include "segnet/roots.hpp"

namespace segnet {

struct CalibrationTargets {
    /// Fraction of jobs found through friends under complete segregation.
    double informal_share = 0.5;
    /// lambda / (p + kappa)
    double homophily_ratio = 3.0;
    /// Employment rate of the specialized groups under complete segregation.
    double target_employment = 0.95;
    /// Mean wage under complete segregation at alpha = 0.5.
    double target_income = 40000.0;
    double rho = 1e-4;

    void validate() const {
        if (!(informal_share > 0.0 && informal_share < 1.0))
            throw InfeasibleTarget("informal_share must lie in (0,1)");
        if (!(homophily_ratio > 0.0)) throw InfeasibleTarget("homophily_ratio must be positive");
        if (!(target_employment > 0.0 && target_employment < 1.0))
            throw InfeasibleTarget("target_employment must lie in (0,1)");
        if (!(target_income > 0.0)) throw InfeasibleTarget("target_income must be positive");
        if (!(rho > 0.0)) throw InfeasibleTarget("rho must be positive");
    }
};

/// Genuine tie probabilities consistent with the calibrated products, needed
/// whenever an actual network is sampled.
struct ExplicitSplit {
    double p = 0.095;
    double kappa = 0.095;
    double lambda = 0.57;
};

/// Calibrated parameters at alpha = 0.5. Without a split the result is in
/// product form (c1 = 1); with one, c1 = c1(p+kappa) / (p+kappa) and the split
/// must reproduce the targeted homophily ratio.
inline ModelParams calibrate(const CalibrationTargets& t,
                             const std::optional<ExplicitSplit>& split = std::nullopt) {
    t.validate();
    // employment at complete segregation: (c0 + c1 x_H) / (1 + c0 + c1 x_H) = e
    const double total_rate = t.target_employment / (1.0 - t.target_employment);
    // informal share: c1 x_H / (c0 + c1 x_H) = phi
    const double c0 = (1.0 - t.informal_share) * total_rate;
    const double network_rate = t.informal_share * total_rate;  // c1 (p + kappa + lambda) / 2
    const double s0 = c0 / (1.0 + c0);
    if (!(t.target_employment > s0) || !(network_rate > 0.0))
        throw InfeasibleTarget("target employment does not exceed the direct-search floor");
    const double c1_total = 2.0 * network_rate;
    const double c1_pk = c1_total / (1.0 + t.homophily_ratio);
    const double c1_lambda = c1_total - c1_pk;
    const double theta = 2.0 * t.target_income;

    if (!split) return ModelParams::from_products(c0, c1_pk, c1_lambda, theta, 0.5, t.rho);

    const double pk = split->p + split->kappa;
    if (!(pk > 0.0) || !(split->lambda > 0.0) || split->p < 0.0 || split->kappa < 0.0)
        throw InvalidSplit("split needs p, kappa >= 0 with p + kappa > 0 and lambda > 0");
    if (pk + split->lambda > 1.0 + 1e-12) throw InvalidSplit("p + kappa + lambda exceeds 1");
    const double c1 = c1_pk / pk;
    if (std::abs(c1 * split->lambda - c1_lambda) > 1e-9 * c1_lambda)
        throw InvalidSplit("split does not reproduce the homophily ratio lambda / (p + kappa)");
    return ModelParams::from_split(split->p, split->kappa, split->lambda, c0, c1, theta, 0.5, t.rho);
}

/// Utility ratio minus the network bound at the corner (1,0) as a function of alpha:
/// U(theta alpha) / U(theta (1 - alpha)) - s_H / s_L.
inline double corner_indifference(const ModelParams& m, double alpha) {
    const Model econ(m);
    const CaraUtility u{m.rho};
    return u(m.theta * alpha) / u(m.theta * (1.0 - alpha)) - econ.s_high() / econ.s_low();
}

/// Share alpha in (0.5, 1) at which Greens are indifferent at (1,0).
/// Bisection runs to the resolution of double precision (|d alpha| far below 1e-8).
inline double find_alpha_hat(const ModelParams& m) {
    auto f = [&](double a) { return corner_indifference(m, a); };
    const double lo = 0.5, hi = 1.0 - 1e-12;
    const double flo = f(lo), fhi = f(hi);
    if (std::signbit(flo) == std::signbit(fhi) && flo != 0.0)
        throw NoRoot("no alpha in (0.5, 1) equalizes the corner payoffs");
    roots::RootOptions opt;
    opt.x_tol = 0.0;
    opt.f_tol = 0.0;
    opt.max_iter = 2000;
    return roots::bisect(f, roots::Bracket{lo, hi, flo, fhi}, opt);
}

/// G(1,0) = 2 - 1 / alpha under complete segregation.
inline double corner_wage_gap(double alpha) { return 2.0 - 1.0 / alpha; }

} // namespace segnet
