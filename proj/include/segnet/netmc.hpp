#pragma once

// Finite-population check of the reduced-form employment function: sample a
// homophilous random graph, run each worker's employment chain, and compare
// the time-averaged employment per (group, education) cell with s(x).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "segnet/error.hpp"
#include "segnet/model.hpp"
#include "segnet/parallel.hpp"

namespace segnet {

inline constexpr std::size_t kCellCount = 4;

/// Cell index: Red-A, Red-B, Green-A, Green-B.
inline std::size_t cell_index(Group g, Education e) {
    return (g == Group::Red ? 0u : 2u) + (e == Education::A ? 0u : 1u);
}

inline std::string cell_name(std::size_t c) {
    static const char* names[kCellCount] = {"R_A", "R_B", "G_A", "G_B"};
    return names[c];
}

namespace detail {

/// Independent stream for (seed, a, b): identical regardless of the thread that draws it.
inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

} // namespace detail

class Population {
public:
    Population() = default;

    /// Workers with the given labels and no ties.
    Population(std::vector<Group> groups, std::vector<Education> educations, std::uint64_t seed = 0)
        : group_(std::move(groups)), education_(std::move(educations)), adj_(group_.size()),
          seed_(seed) {
        if (group_.size() != education_.size()) throw DomainError("label vectors differ in length");
    }

    std::size_t size() const { return group_.size(); }
    std::uint64_t seed() const { return seed_; }
    Group group(std::size_t i) const { return group_[i]; }
    Education education(std::size_t i) const { return education_[i]; }
    std::size_t cell(std::size_t i) const { return cell_index(group_[i], education_[i]); }
    const std::vector<std::uint32_t>& neighbors(std::size_t i) const { return adj_[i]; }
    std::size_t degree(std::size_t i) const { return adj_[i].size(); }

    std::size_t edge_count() const {
        std::size_t d = 0;
        for (const auto& a : adj_) d += a.size();
        return d / 2;
    }

    bool has_edge(std::size_t i, std::size_t j) const {
        return std::binary_search(adj_[i].begin(), adj_[i].end(), static_cast<std::uint32_t>(j));
    }

    /// Adds the undirected tie {i, j}; self-loops and duplicates are rejected.
    bool add_edge(std::size_t i, std::size_t j) {
        if (i == j || i >= size() || j >= size() || has_edge(i, j)) return false;
        insert_sorted(adj_[i], static_cast<std::uint32_t>(j));
        insert_sorted(adj_[j], static_cast<std::uint32_t>(i));
        return true;
    }

    std::size_t same_education_degree(std::size_t i) const {
        std::size_t k = 0;
        for (std::uint32_t j : adj_[i])
            if (education_[j] == education_[i]) ++k;
        return k;
    }

    /// Finite-n friend measure: same-education friend count divided by n.
    double friend_measure(std::size_t i) const {
        return static_cast<double>(same_education_degree(i)) / static_cast<double>(size());
    }

    /// Builds adjacency from per-row upper-triangle neighbor lists (j > i, ascending).
    void set_upper_rows(const std::vector<std::vector<std::uint32_t>>& upper) {
        std::vector<std::size_t> deg(size(), 0);
        for (std::size_t i = 0; i < upper.size(); ++i) {
            deg[i] += upper[i].size();
            for (std::uint32_t j : upper[i]) ++deg[j];
        }
        for (std::size_t i = 0; i < size(); ++i) {
            adj_[i].clear();
            adj_[i].reserve(deg[i]);
        }
        // lower neighbors arrive in ascending i, upper ones are already sorted
        for (std::size_t i = 0; i < upper.size(); ++i)
            for (std::uint32_t j : upper[i]) adj_[j].push_back(static_cast<std::uint32_t>(i));
        for (std::size_t i = 0; i < upper.size(); ++i)
            adj_[i].insert(adj_[i].end(), upper[i].begin(), upper[i].end());
    }

private:
    static void insert_sorted(std::vector<std::uint32_t>& v, std::uint32_t x) {
        v.insert(std::upper_bound(v.begin(), v.end(), x), x);
    }

    std::vector<Group> group_;
    std::vector<Education> education_;
    std::vector<std::vector<std::uint32_t>> adj_;
    std::uint64_t seed_ = 0;
};

/// n workers, half Red and half Green; round(mu_X n / 2) of each group take
/// education A. Every unordered pair is linked independently with its tie
/// probability. Deterministic given the seed.
inline Population generate_population(std::size_t n, const StrategyProfile& mu,
                                      const ModelParams& params, std::uint64_t seed) {
    if (!params.explicit_split)
        throw InvalidSplit("network sampling needs explicit tie probabilities p, kappa, lambda");
    if (params.p + params.kappa + params.lambda > 1.0 + 1e-12)
        throw InvalidSplit("p + kappa + lambda exceeds 1");
    if (n < 100 || n % 2 != 0) throw DomainError("n must be even and at least 100");
    if (n > UINT32_MAX) throw DomainError("n too large");

    const std::size_t half = n / 2;
    const auto kR = static_cast<std::size_t>(std::llround(mu.mu_R() * static_cast<double>(half)));
    const auto kG = static_cast<std::size_t>(std::llround(mu.mu_G() * static_cast<double>(half)));
    std::vector<Group> groups(n);
    std::vector<Education> edu(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool red = i < half;
        groups[i] = red ? Group::Red : Group::Green;
        const std::size_t rank = red ? i : i - half;
        edu[i] = rank < (red ? kR : kG) ? Education::A : Education::B;
    }
    Population pop(groups, edu, seed);

    // Labels are contiguous runs, so each row splits into a few blocks of constant
    // probability; within a block ties are placed by geometric skipping.
    const std::array<std::size_t, 5> bounds = {0, kR, half, half + kG, n};
    std::vector<std::vector<std::uint32_t>> upper(n);
    parallel_for(n, [&](std::size_t i) {
        auto rng = detail::stream(seed, i, 0x6e6574);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        auto& row = upper[i];
        for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
            std::size_t lo = std::max(bounds[b], i + 1);
            const std::size_t hi = bounds[b + 1];
            if (lo >= hi) continue;
            const double prob = tie_probability(groups[i] == groups[lo], edu[i] == edu[lo], params);
            if (prob <= 0.0) continue;
            if (prob >= 1.0) {
                for (std::size_t j = lo; j < hi; ++j) row.push_back(static_cast<std::uint32_t>(j));
                continue;
            }
            const double log_q = std::log1p(-prob);
            std::size_t j = lo;
            while (true) {
                const double u = 1.0 - unif(rng);  // (0, 1]
                const double skip = std::floor(std::log(u) / log_q);
                if (skip >= static_cast<double>(hi - j)) break;
                j += static_cast<std::size_t>(skip);
                row.push_back(static_cast<std::uint32_t>(j));
                ++j;
                if (j >= hi) break;
            }
        }
    });
    pop.set_upper_rows(upper);
    return pop;
}

/// Stationary employment probability of worker i given the fixed graph.
inline double stationary_employment(const Population& pop, std::size_t i, const ModelParams& m) {
    const double c = m.c0 + m.c1 * pop.friend_measure(i);
    return c / (1.0 + c);
}

struct LaborSimOptions {
    double burn_in = 200.0;
    double horizon = 1000.0;
    int replications = 20;
    /// Deviator probes simulated for each cell nobody occupies (0 disables).
    int probes = 500;
};

struct CellResult {
    /// Workers in the cell; for a probed cell, the number of probes.
    std::size_t agents = 0;
    /// The cell is empty in the population and was filled with deviator
    /// probes: workers of this group and education who draw ties to the
    /// population with the usual probabilities but are invisible to it.
    bool probe = false;
    /// Mean over replications of the cell's time-averaged employment.
    double mean_employment = 0.0;
    /// 95% confidence half-width from the across-replication spread.
    double half_width = 0.0;
    double mean_friend_measure = 0.0;
    /// s evaluated at the cell's mean friend measure.
    double s_at_mean_x = 0.0;
    /// Mean over the cell of each worker's exact stationary employment.
    double stationary_mean = 0.0;
    /// |stationary_mean - s_at_mean_x|
    double jensen_gap = 0.0;
};

struct LaborSimResult {
    std::array<CellResult, kCellCount> cells;
    int replications = 0;
    double burn_in = 0.0;
    double horizon = 0.0;

    const CellResult& cell(Group g, Education e) const { return cells[cell_index(g, e)]; }
};

/// Time-averaged employment of a two-state chain (employed -> unemployed at
/// rate 1, unemployed -> employed at rate `up`) over [burn_in, burn_in + horizon].
/// The chain starts from its stationary law.
template <class Rng>
double simulate_occupancy(double up, double burn_in, double horizon, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    bool employed = unif(rng) < up / (1.0 + up);
    const double t_end = burn_in + horizon;
    double t = 0.0;
    double busy = 0.0;
    while (t < t_end) {
        const double rate = employed ? 1.0 : up;
        const double dt = -std::log(1.0 - unif(rng)) / rate;
        const double next = t + dt;
        if (employed) {
            const double a = std::max(t, burn_in);
            const double b = std::min(next, t_end);
            if (b > a) busy += b - a;
        }
        t = next;
        employed = !employed;
    }
    return busy / horizon;
}

/// Per-worker occupancies for one replication.
inline std::vector<double> simulate_agents(const Population& pop, const ModelParams& m,
                                           const LaborSimOptions& opt, int replication) {
    std::vector<double> out(pop.size());
    parallel_for(pop.size(), [&](std::size_t i) {
        auto rng = detail::stream(pop.seed(), static_cast<std::uint64_t>(replication) + 1, i);
        const double up = m.c0 + m.c1 * pop.friend_measure(i);
        out[i] = simulate_occupancy(up, opt.burn_in, opt.horizon, rng);
    });
    return out;
}

namespace detail {

/// Same-education friend counts of probes in cell c, drawn against the population.
inline std::vector<double> probe_friend_measures(const Population& pop, const ModelParams& m,
                                                 std::size_t c, int probes) {
    const Group g = c < 2 ? Group::Red : Group::Green;
    const Education e = c % 2 == 0 ? Education::A : Education::B;
    std::size_t own = 0, other = 0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (pop.education(i) != e) continue;
        (pop.group(i) == g ? own : other) += 1;
    }
    const double p_own = tie_probability(true, true, m);
    const double p_other = tie_probability(false, true, m);
    std::vector<double> x(static_cast<std::size_t>(probes));
    for (int k = 0; k < probes; ++k) {
        auto rng = stream(pop.seed(), 0x70726f6265, c * 1000003u + static_cast<std::uint64_t>(k));
        std::binomial_distribution<long> b_own(static_cast<long>(own), std::min(1.0, p_own));
        std::binomial_distribution<long> b_other(static_cast<long>(other), std::min(1.0, p_other));
        const long count = b_own(rng) + b_other(rng);
        x[static_cast<std::size_t>(k)] = static_cast<double>(count) / static_cast<double>(pop.size());
    }
    return x;
}

} // namespace detail

/// Replicated labor-market simulation on a fixed graph. Employment chains
/// are conditionally independent given the graph, so each worker runs its own
/// clock; replication r of worker i draws from stream (seed, r, i).
/// Empty cells are filled with deviator probes (needs explicit tie
/// probabilities), which measure the off-path employment rate of a worker
/// who switches education.
inline LaborSimResult simulate_labor(const Population& pop, const ModelParams& m,
                                     const LaborSimOptions& opt = {}) {
    if (!(opt.burn_in >= 0.0) || !(opt.horizon > 0.0) || opt.replications < 1 || opt.probes < 0)
        throw DomainError("horizons must be positive, replications >= 1 and probes >= 0");
    LaborSimResult res;
    res.replications = opt.replications;
    res.burn_in = opt.burn_in;
    res.horizon = opt.horizon;

    const EmploymentFunction s{m.c0, m.c1};
    // friend measure of every simulated worker, grouped by cell
    std::array<std::vector<double>, kCellCount> xs;
    for (std::size_t i = 0; i < pop.size(); ++i) xs[pop.cell(i)].push_back(pop.friend_measure(i));
    for (std::size_t c = 0; c < kCellCount; ++c) {
        if (!xs[c].empty() || opt.probes == 0 || !m.explicit_split) continue;
        xs[c] = detail::probe_friend_measures(pop, m, c, opt.probes);
        res.cells[c].probe = true;
    }

    std::vector<std::array<double, kCellCount>> rep_means(static_cast<std::size_t>(opt.replications));
    for (int r = 0; r < opt.replications; ++r) {
        const std::vector<double> occ = simulate_agents(pop, m, opt, r);
        std::array<double, kCellCount> sum{};
        for (std::size_t i = 0; i < pop.size(); ++i) sum[pop.cell(i)] += occ[i];
        std::uint64_t offset = pop.size();
        for (std::size_t c = 0; c < kCellCount; ++c) {
            if (!res.cells[c].probe) continue;
            const auto& x = xs[c];
            std::vector<double> po(x.size());
            parallel_for(x.size(), [&](std::size_t k) {
                auto rng = detail::stream(pop.seed(), static_cast<std::uint64_t>(r) + 1, offset + k);
                po[k] = simulate_occupancy(m.c0 + m.c1 * x[k], opt.burn_in, opt.horizon, rng);
            });
            for (double v : po) sum[c] += v;
            offset += x.size();
        }
        for (std::size_t c = 0; c < kCellCount; ++c)
            rep_means[r][c] = xs[c].empty() ? 0.0 : sum[c] / double(xs[c].size());
    }

    for (std::size_t c = 0; c < kCellCount; ++c) {
        CellResult& cr = res.cells[c];
        cr.agents = xs[c].size();
        if (cr.agents == 0) continue;
        const double k = static_cast<double>(cr.agents);
        double x_sum = 0.0, s_sum = 0.0;
        for (double x : xs[c]) {
            x_sum += x;
            s_sum += s(x);
        }
        cr.mean_friend_measure = x_sum / k;
        cr.s_at_mean_x = s(cr.mean_friend_measure);
        cr.stationary_mean = s_sum / k;
        cr.jensen_gap = std::abs(cr.stationary_mean - cr.s_at_mean_x);
        double mean = 0.0;
        for (const auto& rm : rep_means) mean += rm[c];
        mean /= opt.replications;
        double var = 0.0;
        for (const auto& rm : rep_means) var += (rm[c] - mean) * (rm[c] - mean);
        cr.mean_employment = mean;
        cr.half_width = opt.replications > 1
                            ? 1.96 * std::sqrt(var / (opt.replications - 1) / opt.replications)
                            : 0.0;
    }
    return res;
}

} // namespace segnet
