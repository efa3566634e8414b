#pragma once

#include <random>

#include "segnet/segnet.hpp"

namespace segnet::test {

/// Calibrated parameters in product form.
inline ModelParams calibrated(double alpha = 0.5) {
    ModelParams m = calibrate(CalibrationTargets{});
    m.alpha = alpha;
    return m;
}

/// Calibrated parameters with the default explicit tie probabilities (c1 = 25).
inline ModelParams calibrated_split(double alpha = 0.5) {
    ModelParams m = calibrate(CalibrationTargets{}, ExplicitSplit{});
    m.alpha = alpha;
    return m;
}

inline Model economy(double alpha = 0.5) { return Model(calibrated(alpha)); }

/// Uniform interior profiles from a fixed seed.
class ProfileGen {
public:
    explicit ProfileGen(std::uint64_t seed, double margin = 1e-3) : rng_(seed), u_(margin, 1.0 - margin) {}
    StrategyProfile operator()() { return {u_(rng_), u_(rng_)}; }
    double uniform() { return u_(rng_); }
    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> u_;
};

} // namespace segnet::test
