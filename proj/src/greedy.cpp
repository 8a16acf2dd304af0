#include "skp/greedy.hpp"

#include <algorithm>

#include "skp/bounds.hpp"

namespace skp {

namespace {

// Heap order: highest unit gain first, lowest id on ties.
bool heap_less(const LazyPool::Entry& a, const LazyPool::Entry& b) {
    const double ua = a.unit();
    const double ub = b.unit();
    if (ua != ub) return ua < ub;
    return a.id > b.id;
}

}  // namespace

void LazyPool::build(std::span<const ElementId> candidates, std::span<const double> gains,
                     std::span<const std::int32_t> prefixes,
                     std::span<const double> weights_by_id) {
    heap_.clear();
    heap_.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const ElementId e = candidates[i];
        heap_.push_back({e, static_cast<std::uint32_t>(i), weights_by_id[e], gains[i],
                         prefixes[i]});
    }
    std::make_heap(heap_.begin(), heap_.end(), heap_less);
    recomputes_ = 0;
}

std::optional<LazyPool::Entry> LazyPool::pop_best(const SubmodularOracle& oracle,
                                                  std::int32_t current_prefix,
                                                  std::span<double> gains_out,
                                                  std::span<std::int32_t> prefixes_out) {
    while (!heap_.empty()) {
        std::pop_heap(heap_.begin(), heap_.end(), heap_less);
        Entry top = heap_.back();
        heap_.pop_back();
        if (top.prefix == current_prefix) return top;
        // Stale key; refresh against the current base and contend again.
        top.gain = clamp_gain(oracle.anchor_gain(top.id));
        top.prefix = current_prefix;
        ++recomputes_;
        if (!gains_out.empty()) gains_out[top.pos] = top.gain;
        if (!prefixes_out.empty()) prefixes_out[top.pos] = current_prefix;
        heap_.push_back(top);
        std::push_heap(heap_.begin(), heap_.end(), heap_less);
    }
    return std::nullopt;
}

GreedyAddResult greedy_add(SubmodularOracle& oracle,
                           std::span<const ElementId> candidates,
                           std::span<double> gains,
                           std::span<std::int32_t> prefixes,
                           std::span<const double> weights_by_id,
                           double budget,
                           bool compute_rs_bound) {
    GreedyAddResult out;
    GreedyTrace& trace = out.trace;
    trace.selected_cum_gain.push_back(0.0);
    trace.selected_cum_weight.push_back(0.0);

    LazyPool pool;
    pool.build(candidates, gains, prefixes, weights_by_id);

    std::vector<LazyPool::Entry> skipped;  // discarded for weight, last-known gains
    double cum_gain = 0.0;
    double cum_weight = 0.0;
    bool all_added = true;
    std::int32_t prefix = 0;

    GainProfile scratch;
    scratch.budget = budget;
    const auto note_rs_term = [&](const LazyPool::Entry* winner) {
        scratch.ids.clear();
        scratch.gains.clear();
        scratch.weights.clear();
        const auto put = [&](const LazyPool::Entry& entry) {
            scratch.ids.push_back(entry.id);
            scratch.gains.push_back(entry.gain);
            scratch.weights.push_back(entry.weight);
        };
        for (const LazyPool::Entry& entry : pool.entries()) put(entry);
        if (winner != nullptr) put(*winner);
        for (const LazyPool::Entry& entry : skipped) put(entry);
        const double term = cum_gain + fractional_knapsack_bound(scratch);
        out.rs_bound_gain = std::min(out.rs_bound_gain, term);
    };

    while (auto best = pool.pop_best(oracle, prefix, gains, prefixes)) {
        // One bound term per distinct prefix: iterations that discarded their
        // winner leave the working set unchanged, so their prefix was already
        // priced at the previous resolution.
        if (compute_rs_bound && (trace.steps.empty() || trace.steps.back().added)) {
            note_rs_term(&*best);
        }
        const bool fits = cum_weight + best->weight <= budget;
        if (fits) {
            oracle.anchor_push(best->id);
            ++prefix;
            cum_gain += best->gain;
            cum_weight += best->weight;
            trace.selected.push_back(best->id);
            trace.selected_cum_gain.push_back(cum_gain);
            trace.selected_cum_weight.push_back(cum_weight);
        } else {
            skipped.push_back(*best);
            all_added = false;
        }
        trace.steps.push_back(
            {best->id, best->gain, fits, cum_gain, cum_weight, all_added});
        if (all_added) trace.consecutive_prefix = trace.steps.size();
    }
    if (compute_rs_bound && (trace.steps.empty() || trace.steps.back().added)) {
        note_rs_term(nullptr);
    }

    for (std::size_t i = 0; i < trace.selected.size(); ++i) oracle.anchor_pop();
    out.recomputes = pool.recompute_count();
    return out;
}

}  // namespace skp
