#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "skp/oracle.hpp"

namespace skp {

// One examined candidate: either added to the working set or discarded for
// weight. cum_* reflect the working set after the iteration, so the i-th step
// describes the i-th prefix of the trace.
struct GreedyStep {
    ElementId element = 0;
    double gain = 0.0;  // marginal gain at examination time
    bool added = false;
    double cum_gain = 0.0;
    double cum_weight = 0.0;
    bool consecutive = false;  // every iteration up to this one added
};

struct GreedyTrace {
    std::vector<GreedyStep> steps;
    std::vector<ElementId> selected;           // selection order
    std::vector<double> selected_cum_gain;     // size |selected|+1, [0] = 0
    std::vector<double> selected_cum_weight;   // size |selected|+1, [0] = 0
    std::size_t consecutive_prefix = 0;        // leading iterations that all added

    double total_gain() const { return selected_cum_gain.back(); }
    double total_weight() const { return selected_cum_weight.back(); }
};

// Max-heap of candidates keyed by stale unit gain. An entry whose `prefix`
// tag matches the pool's current prefix is known-fresh; anything older is an
// upper bound by submodularity and gets recomputed only when it surfaces at
// the top. pop_best therefore returns the same element a full rescan would,
// including the lowest-id tie-break.
class LazyPool {
public:
    struct Entry {
        ElementId id = 0;
        std::uint32_t pos = 0;  // index into the candidate span it was built from
        double weight = 1.0;
        double gain = 0.0;
        std::int32_t prefix = -1;

        double unit() const { return gain / weight; }
    };

    void build(std::span<const ElementId> candidates, std::span<const double> gains,
               std::span<const std::int32_t> prefixes,
               std::span<const double> weights_by_id);

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

    // Recomputed gains are written back through gains_out/prefixes_out at the
    // entry's original candidate position (pass empty spans to skip).
    std::optional<Entry> pop_best(const SubmodularOracle& oracle, std::int32_t current_prefix,
                                  std::span<double> gains_out,
                                  std::span<std::int32_t> prefixes_out);

    // Unordered snapshot of the remaining entries (heap layout).
    std::span<const Entry> entries() const { return heap_; }

    std::size_t recompute_count() const { return recomputes_; }

private:
    std::vector<Entry> heap_;
    std::size_t recomputes_ = 0;
};

struct GreedyAddResult {
    GreedyTrace trace;
    // min over trace prefixes of g(X_i) + fractional knapsack bound on the
    // remaining candidates; excludes the f(S_T) offset. Only populated when
    // greedy_add ran with compute_rs_bound.
    double rs_bound_gain = std::numeric_limits<double>::infinity();
    std::size_t recomputes = 0;
};

// One run of the greedy primal heuristic at a node. The oracle's anchor must
// sit at S_T on entry; it is restored before returning. `gains`/`prefixes`
// are working upper bounds on f(e|S_T) and are updated in place as entries
// get recomputed, leaving behind the per-candidate freshness information the
// dual branching scheme shares with its children.
GreedyAddResult greedy_add(SubmodularOracle& oracle,
                           std::span<const ElementId> candidates,
                           std::span<double> gains,
                           std::span<std::int32_t> prefixes,
                           std::span<const double> weights_by_id,
                           double budget,
                           bool compute_rs_bound);

}  // namespace skp
