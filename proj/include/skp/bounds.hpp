#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skp/greedy.hpp"
#include "skp/oracle.hpp"

namespace skp {

// Modular relaxation data at a node: per-candidate marginal gains f(e|S_T)
// (or valid upper bounds on them) with weights and the remaining budget.
struct GainProfile {
    std::vector<ElementId> ids;
    std::vector<double> gains;
    std::vector<double> weights;
    double budget = 0.0;
};

// Approximation ratio of GreedyAdd combined with the best feasible singleton:
// 1 - 1/sqrt(e).
double greedy_approximation_ratio();

// Optimum of the linear relaxation of the 0/1 knapsack over the profile,
// excluding any base-value offset. Ties in unit gain break by ascending id.
double fractional_knapsack_bound(const GainProfile& profile);

// Rounding + dynamic-programming bound: a value v with OPT <= v <= (1+eps)*OPT
// where OPT is the exact 0/1 knapsack optimum over the profile. Elements
// heavier than the budget are skipped. Scaling uses K = eps * gmax / n over
// the fitting candidates; when every fitting gain is integral and K < 1, K is
// clamped to 1, which makes the DP exact at no guarantee cost.
double knapsack_ptas_bound(const GainProfile& profile, double epsilon);

// f(S_T) + max(greedy gain, best feasible singleton gain) / (1 - 1/sqrt(e)).
double domination_bound(double node_value, double greedy_gain, double best_singleton);

// Post-hoc refined subset bound: f(S_T) plus the minimum over the distinct
// greedy-trace prefixes X_i of g(X_i) + fractional knapsack bound over the
// true residual gains g(e|X_i) for all e in C_T, with budget W_T. The
// oracle's anchor must be clear of S_T's elements; `selected` is pushed and
// popped internally. The in-search variant lives in the solver and works off
// the lazily maintained gains instead of re-querying.
double refined_subset_bound(SubmodularOracle& oracle,
                            std::span<const ElementId> selected,
                            std::span<const ElementId> candidates,
                            std::span<const double> weights_by_id,
                            double budget,
                            const GreedyTrace& trace);

// Sorted unit-gain order with prefix sums for repeated fractional-knapsack
// queries at different budgets or suffixes; O(log n) per query after an
// O(n log n) build.
class SortedGainView {
public:
    SortedGainView() = default;
    SortedGainView(std::span<const ElementId> ids, std::span<const double> gains,
                   std::span<const double> weights);

    // fractional knapsack over all items.
    double bound(double budget) const { return bound_suffix(0, budget); }
    // fractional knapsack over the items after the first `skip` in sorted order.
    double bound_suffix(std::size_t skip, double budget) const;

    std::span<const std::uint32_t> order() const { return order_; }
    std::size_t size() const { return order_.size(); }

private:
    std::vector<std::uint32_t> order_;    // positions into the input spans
    std::vector<double> prefix_weight_;   // size n+1
    std::vector<double> prefix_gain_;     // size n+1
    std::vector<double> unit_;            // per sorted position
};

}  // namespace skp
