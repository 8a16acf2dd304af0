#include "skp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace skp {

double greedy_approximation_ratio() {
    static const double alpha = 1.0 - std::exp(-0.5);
    return alpha;
}

namespace {

// Sort positions by unit gain descending, id ascending on ties.
std::vector<std::uint32_t> unit_gain_order(std::span<const ElementId> ids,
                                           std::span<const double> gains,
                                           std::span<const double> weights) {
    std::vector<std::uint32_t> order(ids.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double ua = gains[a] / weights[a];
        const double ub = gains[b] / weights[b];
        if (ua != ub) return ua > ub;
        return ids[a] < ids[b];
    });
    return order;
}

}  // namespace

SortedGainView::SortedGainView(std::span<const ElementId> ids,
                               std::span<const double> gains,
                               std::span<const double> weights) {
    order_ = unit_gain_order(ids, gains, weights);
    const std::size_t n = order_.size();
    prefix_weight_.assign(n + 1, 0.0);
    prefix_gain_.assign(n + 1, 0.0);
    unit_.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint32_t p = order_[k];
        prefix_weight_[k + 1] = prefix_weight_[k] + weights[p];
        prefix_gain_[k + 1] = prefix_gain_[k] + gains[p];
        unit_[k] = gains[p] / weights[p];
    }
}

double SortedGainView::bound_suffix(std::size_t skip, double budget) const {
    const std::size_t n = order_.size();
    if (skip >= n || budget <= 0.0) return 0.0;
    // Largest l with total weight of sorted items (skip, l] within budget.
    const double limit = prefix_weight_[skip] + budget;
    std::size_t l =
        static_cast<std::size_t>(std::upper_bound(prefix_weight_.begin() + skip,
                                                  prefix_weight_.end(), limit) -
                                 prefix_weight_.begin()) -
        1;
    double value = prefix_gain_[l] - prefix_gain_[skip];
    if (l < n) {
        const double slack = limit - prefix_weight_[l];
        value += slack * unit_[l];
    }
    return value;
}

double fractional_knapsack_bound(const GainProfile& profile) {
    if (profile.ids.empty() || profile.budget <= 0.0) return 0.0;
    // Heap-select in unit-gain order; the budget usually exhausts after a few
    // items, which beats sorting the whole profile.
    const auto worse = [&](std::uint32_t a, std::uint32_t b) {
        const double ua = profile.gains[a] / profile.weights[a];
        const double ub = profile.gains[b] / profile.weights[b];
        if (ua != ub) return ua < ub;
        return profile.ids[a] > profile.ids[b];
    };
    std::vector<std::uint32_t> heap;
    heap.reserve(profile.ids.size());
    for (std::size_t i = 0; i < profile.ids.size(); ++i) {
        if (profile.gains[i] > 0.0) heap.push_back(static_cast<std::uint32_t>(i));
    }
    std::make_heap(heap.begin(), heap.end(), worse);
    double value = 0.0;
    double remaining = profile.budget;
    while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), worse);
        const std::uint32_t p = heap.back();
        heap.pop_back();
        if (profile.weights[p] <= remaining) {
            value += profile.gains[p];
            remaining -= profile.weights[p];
            if (remaining <= 0.0) break;
        } else {
            value += remaining * profile.gains[p] / profile.weights[p];
            break;
        }
    }
    return value;
}

double knapsack_ptas_bound(const GainProfile& profile, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (profile.budget <= 0.0) return 0.0;

    // Only candidates that fit the budget on their own can appear in a
    // feasible solution; the rest are dropped up front.
    std::vector<double> gains;
    std::vector<double> weights;
    double gain_max = 0.0;
    bool integral = true;
    for (std::size_t i = 0; i < profile.ids.size(); ++i) {
        if (profile.weights[i] > profile.budget) continue;
        const double g = profile.gains[i];
        if (g <= 0.0) continue;
        gains.push_back(g);
        weights.push_back(profile.weights[i]);
        gain_max = std::max(gain_max, g);
        integral = integral && g == std::floor(g) && g < 0x1.0p53;
    }
    if (gains.empty() || gain_max == 0.0) return 0.0;

    const std::size_t n = gains.size();
    double scale = epsilon * gain_max / static_cast<double>(n);
    if (integral && scale < 1.0) scale = 1.0;

    std::vector<std::uint64_t> rounded(n);
    std::uint64_t value_cap = 0;
    for (std::size_t i = 0; i < n; ++i) {
        rounded[i] = static_cast<std::uint64_t>(std::ceil(gains[i] / scale));
        value_cap += rounded[i];
    }
    if (value_cap > 200'000'000ULL) {
        throw std::invalid_argument("epsilon too small: rounded-value table would need " +
                                    std::to_string(value_cap) + " entries");
    }

    // Minimal weight achieving each rounded-value total.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> min_weight(value_cap + 1, inf);
    min_weight[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t r = rounded[i];
        for (std::uint64_t v = value_cap; v >= r; --v) {
            const double w = min_weight[v - r] + weights[i];
            if (w < min_weight[v]) min_weight[v] = w;
        }
    }

    // Admit borderline sets rather than reject them: rejecting a feasible set
    // could push the result below the true optimum.
    const double budget_slack = profile.budget + 1e-9 * std::max(1.0, profile.budget);
    std::uint64_t best = 0;
    for (std::uint64_t v = value_cap; v > 0; --v) {
        if (min_weight[v] <= budget_slack) {
            best = v;
            break;
        }
    }
    return scale * static_cast<double>(best);
}

double domination_bound(double node_value, double greedy_gain, double best_singleton) {
    const double achieved = std::max(greedy_gain, best_singleton);
    if (achieved <= 0.0) return node_value;
    return node_value + achieved / greedy_approximation_ratio();
}

double refined_subset_bound(SubmodularOracle& oracle,
                            std::span<const ElementId> selected,
                            std::span<const ElementId> candidates,
                            std::span<const double> weights_by_id,
                            double budget,
                            const GreedyTrace& trace) {
    for (ElementId e : selected) oracle.anchor_push(e);
    const double base_value = oracle.anchor_value();

    GainProfile profile;
    profile.budget = budget;
    profile.ids.reserve(candidates.size());
    profile.gains.reserve(candidates.size());
    profile.weights.reserve(candidates.size());

    const auto prefix_term = [&]() {
        profile.ids.clear();
        profile.gains.clear();
        profile.weights.clear();
        for (ElementId e : candidates) {
            if (oracle.anchor_contains(e)) continue;  // member of X_i, gain 0
            profile.ids.push_back(e);
            profile.gains.push_back(clamp_gain(oracle.anchor_gain(e)));
            profile.weights.push_back(weights_by_id[e]);
        }
        const double prefix_gain = oracle.anchor_value() - base_value;
        return prefix_gain + fractional_knapsack_bound(profile);
    };

    double best = prefix_term();  // X_0
    std::size_t pushed = 0;
    for (const GreedyStep& step : trace.steps) {
        if (!step.added) continue;  // X_i unchanged, duplicate prefix
        oracle.anchor_push(step.element);
        ++pushed;
        best = std::min(best, prefix_term());
    }

    for (std::size_t i = 0; i < pushed; ++i) oracle.anchor_pop();
    for (std::size_t i = 0; i < selected.size(); ++i) oracle.anchor_pop();
    return base_value + best;
}

}  // namespace skp
