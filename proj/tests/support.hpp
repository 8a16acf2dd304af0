#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "skp/instance.hpp"
#include "skp/oracle.hpp"
#include "skp/rng.hpp"

namespace testsupport {

// Three disjoint singleton items with values (3, 1, 5): a modular objective.
// Weights (1, 1, 2), budget 2. Optimum is {c} with value 5.
inline skp::Instance make_e1() {
    skp::CovData cov;
    cov.item_count = 3;
    cov.values = {3.0, 1.0, 5.0};
    cov.sets = {{0}, {1}, {2}};
    return skp::build_instance(skp::ProblemKind::cov, 3, std::move(cov),
                               skp::WeightScheme::explicit_weights, 0,
                               {1.0, 1.0, 2.0}, 2.0);
}

// Coverage triangle: C1={1,2}, C2={2,3}, C3={1,3} over three unit-value
// items, unit weights, budget 2. Any two sets cover everything: optimum 3.
inline skp::Instance make_e2() {
    skp::CovData cov;
    cov.item_count = 3;
    cov.values = {1.0, 1.0, 1.0};
    cov.sets = {{0, 1}, {1, 2}, {0, 2}};
    return skp::build_instance(skp::ProblemKind::cov, 3, std::move(cov),
                               skp::WeightScheme::explicit_weights, 0,
                               {1.0, 1.0, 1.0}, 2.0);
}

// Exact 0/1 knapsack over modular values by subset enumeration (n <= 20).
inline double exact_knapsack(std::span<const double> gains,
                             std::span<const double> weights, double budget) {
    const std::size_t n = gains.size();
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        double g = 0.0;
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1ULL << i)) {
                g += gains[i];
                w += weights[i];
            }
        }
        if (w <= budget) best = std::max(best, g);
    }
    return best;
}

// Exact restricted optimum max f(base u X) over X subseteq candidates with
// w(X) <= budget, by enumeration. Used as the shadow oracle for prune checks.
inline double restricted_optimum(skp::SubmodularOracle& oracle,
                                 std::span<const skp::ElementId> base,
                                 std::span<const skp::ElementId> candidates,
                                 std::span<const double> weights_by_id,
                                 double budget) {
    const std::size_t n = candidates.size();
    std::vector<skp::ElementId> set(base.begin(), base.end());
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        set.resize(base.size());
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1ULL << i)) {
                set.push_back(candidates[i]);
                w += weights_by_id[candidates[i]];
            }
        }
        if (w <= budget) best = std::max(best, oracle.evaluate(set));
    }
    return best;
}

// Randomized monotonicity + submodularity spot check via the public
// evaluate() interface: f(e|S) >= f(e|T) >= 0 for random S subseteq T, e not
// in T. Returns false on the first violation.
inline bool check_submodular_monotone(const skp::SubmodularOracle& oracle,
                                      std::size_t trials, std::uint64_t seed) {
    const std::size_t n = oracle.universe_size();
    if (n == 0) return true;
    skp::SplitMix64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<skp::ElementId> small;
        std::vector<skp::ElementId> large;
        skp::ElementId e = static_cast<skp::ElementId>(rng.next_below(n));
        for (std::size_t i = 0; i < n; ++i) {
            if (i == e) continue;
            const double r = rng.next_unit();
            if (r < 0.25) {
                small.push_back(static_cast<skp::ElementId>(i));
                large.push_back(static_cast<skp::ElementId>(i));
            } else if (r < 0.55) {
                large.push_back(static_cast<skp::ElementId>(i));
            }
        }
        const double g_small = skp::marginal_gain(oracle, e, small);
        const double g_large = skp::marginal_gain(oracle, e, large);
        if (!(g_small >= g_large - 1e-9) || !(g_large >= 0.0)) return false;
    }
    return true;
}

// Deliberately broken objective: worthless singletons, a large bonus once
// both 0 and 1 are present. Violates submodularity, so zero-gain reductions
// and greedy-backed bounds misjudge it; verify_all_configs must notice.
class PairBonusOracle final : public skp::SubmodularOracle {
public:
    PairBonusOracle() { anchor_clear(); }

    std::size_t universe_size() const override { return 3; }
    bool integral_valued() const override { return true; }
    double evaluate(std::span<const skp::ElementId> set) const override {
        bool has0 = false;
        bool has1 = false;
        for (skp::ElementId e : set) {
            has0 = has0 || e == 0;
            has1 = has1 || e == 1;
        }
        return has0 && has1 ? 5.0 : 0.0;
    }
};

// Monotone submodular fixture with f(empty) != 0, for the normalization
// adapter.
class OffsetOracle final : public skp::SubmodularOracle {
public:
    OffsetOracle() { anchor_clear(); }

    std::size_t universe_size() const override { return 2; }
    bool integral_valued() const override { return true; }
    double evaluate(std::span<const skp::ElementId> set) const override {
        bool seen[2] = {false, false};
        for (skp::ElementId e : set) seen[e] = true;
        return 7.0 + (seen[0] ? 2.0 : 0.0) + (seen[1] ? 3.0 : 0.0);
    }
};

// Deterministic mixed-family instance pool for property tests.
inline std::vector<skp::Instance> small_random_suite(std::size_t per_family,
                                                     std::uint64_t seed_base) {
    std::vector<skp::Instance> instances;
    const skp::ProblemKind kinds[] = {skp::ProblemKind::cov, skp::ProblemKind::inf,
                                      skp::ProblemKind::loc, skp::ProblemKind::dom};
    const skp::WeightScheme schemes[] = {skp::WeightScheme::normal,
                                         skp::WeightScheme::uniform,
                                         skp::WeightScheme::unit};
    for (skp::ProblemKind kind : kinds) {
        for (std::size_t i = 0; i < per_family; ++i) {
            skp::GenerateParams params;
            params.n = 6 + (i % 7);
            params.m = params.n + 2 + (i % 5);
            params.density = 0.2 + 0.05 * static_cast<double>(i % 5);
            params.scheme = schemes[i % 3];
            params.weight_seed = seed_base + i;
            params.budget = 1.0 + 0.5 * static_cast<double>(i % 6);
            instances.push_back(
                skp::generate_random_instance(kind, params, seed_base + i));
        }
    }
    return instances;
}

}  // namespace testsupport
