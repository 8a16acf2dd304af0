#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skp/greedy.hpp"
#include "skp/oracle.hpp"

namespace skp {

enum class BoundKind { knapsack, fractional, domination, refined };
enum class BranchKind { basic, dual };
enum class SolveStatus { optimal, time_limit, node_limit };

const char* to_string(BoundKind kind);
const char* to_string(BranchKind kind);
const char* to_string(SolveStatus status);
std::optional<BoundKind> bound_from_string(std::string_view name);
std::optional<BranchKind> branch_from_string(std::string_view name);

// Diagnostics emitted once per search node when a sink is installed. Only for
// tests and studies; the search never reads these back.
struct NodeRecord {
    std::vector<ElementId> selected;          // S_T
    std::vector<ElementId> candidates_entry;  // C_T before reductions
    std::vector<ElementId> candidates;        // C_T after reductions
    double base_value = 0.0;                  // f(S_T)
    double budget = 0.0;                      // W_T
    double bound_value = 0.0;                 // bound used for pruning
    double entry_fractional_bound = 0.0;      // f(S_T) + fk over entry gains
    double refined_bound = 0.0;               // only meaningful for the rs bound
    bool pruned = false;
    double incumbent = 0.0;  // lb* when the prune decision was taken
    // greedy payload (populated when the node ran GreedyAdd)
    bool greedy_ran = false;
    std::size_t consecutive_prefix = 0;
    double prefix_gain = 0.0;    // g(X_p)
    double prefix_weight = 0.0;  // w(X_p)
    double greedy_gain = 0.0;    // g of the full greedy set
};

using NodeSink = std::function<void(const NodeRecord&)>;

struct SolverConfig {
    BoundKind bound = BoundKind::refined;
    BranchKind branching = BranchKind::dual;
    double epsilon = 1.0;  // rounding parameter of the knapsack bound
    // Greedy incumbent updates. Unset: enabled for the domination/refined
    // bounds and for dual branching, disabled for the basic knapsack and
    // fractional configurations (they are faster without it). Explicitly
    // disabling it under dual branching is rejected; the branching scheme is
    // built from the greedy trace.
    std::optional<bool> primal_heuristic;
    bool lazy_update = true;
    bool reductions = true;
    double time_limit_seconds = 1800.0;
    std::uint64_t node_limit = 0;  // 0 = unlimited
    NodeSink instrumentation;      // empty = off
};

// Whether GreedyAdd's result feeds the incumbent under this configuration.
bool primal_enabled(const SolverConfig& config);
// Throws std::invalid_argument on inconsistent configurations.
void validate_config(const SolverConfig& config);

struct SolveReport {
    double optimum = 0.0;
    std::vector<ElementId> solution;  // ascending ids
    std::uint64_t nodes_visited = 0;
    std::uint64_t oracle_calls = 0;
    double wall_seconds = 0.0;
    SolveStatus status = SolveStatus::optimal;
    double root_bound = 0.0;
};

// Exact maximization of f over subsets within the budget. Depth-first
// branch-and-bound; strictly single-threaded and deterministic, so repeated
// runs report identical node and oracle-call counts.
SolveReport solve(SubmodularOracle& oracle, std::span<const double> weights,
                  double budget, const SolverConfig& config);

// Branch-and-bound entry at an arbitrary node (S_T preselected, candidate
// order as given). `budget` is the total budget W; the node budget is
// W - w(S_T). Reports the restricted optimum over supersets of `selected`.
SolveReport solve_node(SubmodularOracle& oracle, std::span<const double> weights,
                       double budget, std::span<const ElementId> selected,
                       std::span<const ElementId> candidates,
                       const SolverConfig& config);

// Exact verification oracle: plain subset enumeration with a feasibility
// filter, independent of the branch-and-bound machinery. Refuses universes
// larger than 25 elements. Ties resolve toward the inclusion-first
// enumeration order, so an all-fitting universe reports the full set.
std::pair<double, std::vector<ElementId>> brute_force(SubmodularOracle& oracle,
                                                      std::span<const double> weights,
                                                      double budget);

// --- node-level primitives (exposed for direct testing) --------------------

// Recompute f(e|S_T) for candidates whose stale unit gain exceeds
// (incumbent - base) / budget; with lazy_enabled false every stale entry is
// recomputed. prefixes[i] == 0 marks an entry already fresh at this node.
// Returns the number of refreshed entries.
std::size_t lazy_refresh(const SubmodularOracle& oracle,
                         std::span<const ElementId> candidates,
                         std::span<double> gains, std::span<std::int32_t> prefixes,
                         std::span<const double> weights_by_id, double base_value,
                         double budget, double incumbent, bool lazy_enabled);

struct ReduceOutcome {
    std::vector<std::uint32_t> kept;  // surviving positions, original order
    std::size_t rule1_removed = 0;    // overweight or zero gain
    std::size_t rule2_removed = 0;    // cannot beat the incumbent
};
ReduceOutcome reduce_candidates(std::span<const ElementId> candidates,
                                std::span<const double> gains,
                                std::span<const double> weights_by_id,
                                double base_value, double budget, double incumbent,
                                double tolerance);

// Child-node construction formulas, without the incumbent cutoff. `added`
// holds the elements joining S_T, `candidates` the child candidate order.
struct NodeDelta {
    std::vector<ElementId> added;
    std::vector<ElementId> candidates;
    double budget = 0.0;
};
// One child per feasible candidate of the unit-gain-sorted order.
std::vector<NodeDelta> basic_child_layout(std::span<const ElementId> sorted_candidates,
                                          std::span<const double> weights_by_id,
                                          double budget);
// selected_count+1 children over the greedy-prefix order.
std::vector<NodeDelta> dual_child_layout(std::span<const ElementId> order,
                                         std::size_t selected_count,
                                         std::span<const double> weights_by_id,
                                         double budget);

}  // namespace skp
