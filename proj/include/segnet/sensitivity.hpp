#pragma once

#include <array>
#include <string>
#include <vector>

#include "segnet/calibration.hpp"
#include "segnet/parallel.hpp"

namespace segnet {

enum class CalibratedParameter { S0, C1PK, C1Lambda, Rho, Theta };

inline constexpr std::array<CalibratedParameter, 5> kCalibratedParameters = {
    CalibratedParameter::S0, CalibratedParameter::C1PK, CalibratedParameter::C1Lambda,
    CalibratedParameter::Rho, CalibratedParameter::Theta};

inline std::string to_string(CalibratedParameter p) {
    switch (p) {
    case CalibratedParameter::S0: return "s0";
    case CalibratedParameter::C1PK: return "c1(p+kappa)";
    case CalibratedParameter::C1Lambda: return "c1*lambda";
    case CalibratedParameter::Rho: return "rho";
    case CalibratedParameter::Theta: return "theta";
    }
    return "?";
}

inline double parameter_value(const ModelParams& m, CalibratedParameter p) {
    switch (p) {
    case CalibratedParameter::S0: return m.s0();
    case CalibratedParameter::C1PK: return m.c1_pk();
    case CalibratedParameter::C1Lambda: return m.c1_lambda();
    case CalibratedParameter::Rho: return m.rho;
    case CalibratedParameter::Theta: return m.theta;
    }
    return 0.0;
}

/// Product-form parameters with one calibrated quantity multiplied by `factor`.
/// Scaling s0 moves c0 = s0 / (1 - s0) and holds the c1 products fixed.
inline ModelParams scale_parameter(const ModelParams& m, CalibratedParameter p, double factor) {
    double c0 = m.c0, pk = m.c1_pk(), lam = m.c1_lambda(), rho = m.rho, theta = m.theta;
    switch (p) {
    case CalibratedParameter::S0: {
        const double s0 = m.s0() * factor;
        if (!(s0 > 0.0 && s0 < 1.0)) throw DomainError("perturbed s0 leaves (0,1)");
        c0 = s0 / (1.0 - s0);
        break;
    }
    case CalibratedParameter::C1PK: pk *= factor; break;
    case CalibratedParameter::C1Lambda: lam *= factor; break;
    case CalibratedParameter::Rho: rho *= factor; break;
    case CalibratedParameter::Theta: theta *= factor; break;
    }
    return ModelParams::from_products(c0, pk, lam, theta, m.alpha, rho);
}

struct ElasticityRow {
    CalibratedParameter parameter;
    double value = 0.0;
    /// Central differences.
    double alpha_hat = 0.0;
    double wage_gap = 0.0;
    /// One-sided (+rel_step) differences.
    double alpha_hat_forward = 0.0;
    double wage_gap_forward = 0.0;
};

struct ElasticityTable {
    double rel_step = 1e-2;
    double alpha_hat = 0.0;
    double wage_gap = 0.0;
    std::vector<ElasticityRow> rows;

    const ElasticityRow& row(CalibratedParameter p) const {
        for (const auto& r : rows)
            if (r.parameter == p) return r;
        throw DomainError("no such row");
    }
};

/// Elasticities of alpha_hat and of the corner wage gap G(1,0) = 2 - 1/alpha_hat
/// with respect to each calibrated quantity.
inline ElasticityTable elasticities(const ModelParams& params, double rel_step = 1e-2) {
    if (!(rel_step >= 1e-4 && rel_step <= 1e-1)) throw DomainError("rel_step must lie in [1e-4, 1e-1]");
    const ModelParams base = params.normalized();
    ElasticityTable t;
    t.rel_step = rel_step;
    t.alpha_hat = find_alpha_hat(base);
    t.wage_gap = corner_wage_gap(t.alpha_hat);
    t.rows.resize(kCalibratedParameters.size());
    parallel_for(kCalibratedParameters.size(), [&](std::size_t i) {
        const CalibratedParameter p = kCalibratedParameters[i];
        const double a_up = find_alpha_hat(scale_parameter(base, p, 1.0 + rel_step));
        const double a_dn = find_alpha_hat(scale_parameter(base, p, 1.0 - rel_step));
        const double g_up = corner_wage_gap(a_up), g_dn = corner_wage_gap(a_dn);
        ElasticityRow& r = t.rows[i];
        r.parameter = p;
        r.value = parameter_value(base, p);
        r.alpha_hat = (a_up - a_dn) / (2.0 * rel_step) / t.alpha_hat;
        r.wage_gap = (g_up - g_dn) / (2.0 * rel_step) / t.wage_gap;
        r.alpha_hat_forward = (a_up - t.alpha_hat) / rel_step / t.alpha_hat;
        r.wage_gap_forward = (g_up - t.wage_gap) / rel_step / t.wage_gap;
    });
    return t;
}

} // namespace segnet
