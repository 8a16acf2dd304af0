#include "skp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "skp/bounds.hpp"

namespace skp {

const char* to_string(BoundKind kind) {
    switch (kind) {
        case BoundKind::knapsack: return "k";
        case BoundKind::fractional: return "fk";
        case BoundKind::domination: return "dom";
        case BoundKind::refined: return "rs";
    }
    return "?";
}

const char* to_string(BranchKind kind) {
    return kind == BranchKind::basic ? "basic" : "dual";
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::time_limit: return "time_limit";
        case SolveStatus::node_limit: return "node_limit";
    }
    return "?";
}

std::optional<BoundKind> bound_from_string(std::string_view name) {
    if (name == "k") return BoundKind::knapsack;
    if (name == "fk") return BoundKind::fractional;
    if (name == "dom") return BoundKind::domination;
    if (name == "rs") return BoundKind::refined;
    return std::nullopt;
}

std::optional<BranchKind> branch_from_string(std::string_view name) {
    if (name == "basic") return BranchKind::basic;
    if (name == "dual") return BranchKind::dual;
    return std::nullopt;
}

bool primal_enabled(const SolverConfig& config) {
    if (config.primal_heuristic.has_value()) return *config.primal_heuristic;
    return config.branching == BranchKind::dual ||
           config.bound == BoundKind::domination || config.bound == BoundKind::refined;
}

void validate_config(const SolverConfig& config) {
    if (config.bound == BoundKind::knapsack && !(config.epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive for the knapsack bound");
    }
    if (config.branching == BranchKind::dual && config.primal_heuristic.has_value() &&
        !*config.primal_heuristic) {
        throw std::invalid_argument("dual branching requires the primal heuristic");
    }
    if (!(config.time_limit_seconds >= 0.0)) {
        throw std::invalid_argument("time limit must be nonnegative");
    }
}

std::size_t lazy_refresh(const SubmodularOracle& oracle,
                         std::span<const ElementId> candidates,
                         std::span<double> gains, std::span<std::int32_t> prefixes,
                         std::span<const double> weights_by_id, double base_value,
                         double budget, double incumbent, bool lazy_enabled) {
    const double threshold = budget > 0.0
                                 ? (incumbent - base_value) / budget
                                 : std::numeric_limits<double>::infinity();
    std::size_t refreshed = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (prefixes[i] == 0) continue;  // already fresh at this node
        const double stale_unit = gains[i] / weights_by_id[candidates[i]];
        if (!lazy_enabled || stale_unit > threshold) {
            gains[i] = clamp_gain(oracle.anchor_gain(candidates[i]));
            prefixes[i] = 0;
            ++refreshed;
        }
    }
    return refreshed;
}

ReduceOutcome reduce_candidates(std::span<const ElementId> candidates,
                                std::span<const double> gains,
                                std::span<const double> weights_by_id,
                                double base_value, double budget, double incumbent,
                                double tolerance) {
    ReduceOutcome out;
    // Rule 1: overweight or zero marginal gain. A stale zero implies a true
    // zero because stale values upper-bound fresh ones.
    std::vector<std::uint32_t> survivors;
    survivors.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (weights_by_id[candidates[i]] > budget || gains[i] == 0.0) {
            ++out.rule1_removed;
        } else {
            survivors.push_back(static_cast<std::uint32_t>(i));
        }
    }

    // Rule 2: even together with a full fractional relaxation of the rest,
    // the element cannot beat the incumbent.
    std::vector<ElementId> ids(survivors.size());
    std::vector<double> g(survivors.size());
    std::vector<double> w(survivors.size());
    for (std::size_t k = 0; k < survivors.size(); ++k) {
        ids[k] = candidates[survivors[k]];
        g[k] = gains[survivors[k]];
        w[k] = weights_by_id[ids[k]];
    }
    const SortedGainView view(ids, g, w);
    out.kept.reserve(survivors.size());
    for (std::size_t k = 0; k < survivors.size(); ++k) {
        const double residual = view.bound(budget - w[k]);
        if (base_value + g[k] + residual <= incumbent + tolerance) {
            ++out.rule2_removed;
        } else {
            out.kept.push_back(survivors[k]);
        }
    }
    return out;
}

std::vector<NodeDelta> basic_child_layout(std::span<const ElementId> sorted_candidates,
                                          std::span<const double> weights_by_id,
                                          double budget) {
    std::vector<NodeDelta> children;
    for (std::size_t i = 0; i < sorted_candidates.size(); ++i) {
        const ElementId c = sorted_candidates[i];
        if (weights_by_id[c] > budget) continue;  // no feasible superset
        NodeDelta child;
        child.added = {c};
        child.candidates.assign(sorted_candidates.begin() + i + 1, sorted_candidates.end());
        child.budget = budget - weights_by_id[c];
        children.push_back(std::move(child));
    }
    return children;
}

std::vector<NodeDelta> dual_child_layout(std::span<const ElementId> order,
                                         std::size_t selected_count,
                                         std::span<const double> weights_by_id,
                                         double budget) {
    std::vector<NodeDelta> children;
    double prefix_weight = 0.0;
    for (std::size_t i = 0; i <= selected_count; ++i) {
        if (i > 0) prefix_weight += weights_by_id[order[i - 1]];
        NodeDelta child;
        child.added.assign(order.begin(), order.begin() + i);
        const std::size_t from = std::min(i + 1, order.size());
        child.candidates.assign(order.begin() + from, order.end());
        child.budget = budget - prefix_weight;
        children.push_back(std::move(child));
    }
    return children;
}

std::pair<double, std::vector<ElementId>> brute_force(SubmodularOracle& oracle,
                                                      std::span<const double> weights,
                                                      double budget) {
    const std::size_t n = oracle.universe_size();
    if (n > 25) {
        throw std::invalid_argument("brute force refused: universe of size " +
                                    std::to_string(n) + " exceeds 25 elements");
    }
    if (weights.size() != n) throw std::invalid_argument("one weight per element required");

    oracle.anchor_clear();
    double best = 0.0;
    std::vector<ElementId> best_set;
    std::vector<ElementId> current;
    current.reserve(n);

    // Inclusion-first depth-first enumeration; strict improvement keeps the
    // first maximizer found, hence the full set when everything fits.
    const auto recurse = [&](const auto& self, std::size_t e, double used) -> void {
        if (e == n) {
            const double value = oracle.anchor_value();
            if (value > best) {
                best = value;
                best_set = current;
            }
            return;
        }
        if (used + weights[e] <= budget) {
            oracle.anchor_push(static_cast<ElementId>(e));
            current.push_back(static_cast<ElementId>(e));
            self(self, e + 1, used + weights[e]);
            current.pop_back();
            oracle.anchor_pop();
        }
        self(self, e + 1, used);
    };
    recurse(recurse, 0, 0.0);
    return {best, std::move(best_set)};
}

// ---------------------------------------------------------------------------

namespace {

struct Frame {
    std::vector<ElementId> cand;
    std::vector<double> gain;          // upper bounds on f(e|S_T)
    std::vector<std::int32_t> prefix;  // 0 fresh at this node, -1 inherited
    double base = 0.0;                 // f(S_T)
    double budget = 0.0;               // W_T
};

class Engine {
public:
    Engine(SubmodularOracle& oracle, std::span<const double> weights, double budget,
           const SolverConfig& config)
        : counting_(oracle),
          weights_(weights),
          total_budget_(budget),
          config_(config),
          primal_(primal_enabled(config)),
          greedy_needed_(config.bound == BoundKind::domination ||
                         config.bound == BoundKind::refined ||
                         config.branching == BranchKind::dual),
          integral_(oracle.integral_valued()) {}

    SolveReport run(std::span<const ElementId> selected,
                    std::span<const ElementId> candidates) {
        counting_.anchor_clear();
        path_.clear();
        double selected_weight = 0.0;
        for (ElementId e : selected) {
            push_element(e);
            selected_weight += weights_[e];
        }
        Frame root;
        root.cand.assign(candidates.begin(), candidates.end());
        root.gain.assign(root.cand.size(), std::numeric_limits<double>::infinity());
        root.prefix.assign(root.cand.size(), -1);
        root.base = counting_.anchor_value();
        root.budget = total_budget_ - selected_weight;
        if (root.budget < 0.0) {
            throw std::invalid_argument("preselected elements exceed the budget");
        }

        incumbent_ = root.base;
        best_ = path_;
        start_ = std::chrono::steady_clock::now();
        branch_bound(root);

        SolveReport report;
        report.optimum = incumbent_;
        report.solution = best_;
        std::sort(report.solution.begin(), report.solution.end());
        report.nodes_visited = nodes_;
        report.oracle_calls = counting_.call_count();
        report.wall_seconds = elapsed();
        report.status = stop_.value_or(SolveStatus::optimal);
        report.root_bound = root_bound_;
        return report;
    }

private:
    double tolerance() const {
        return integral_ ? 0.0 : 1e-9 * std::max(1.0, std::abs(incumbent_));
    }

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

    void push_element(ElementId e) {
        counting_.anchor_push(e);
        path_.push_back(e);
    }

    std::vector<double> gather_weights(std::span<const ElementId> ids) const {
        std::vector<double> w(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i) w[i] = weights_[ids[i]];
        return w;
    }

    void pop_element() {
        counting_.anchor_pop();
        path_.pop_back();
    }

    void consider_incumbent(double value, std::span<const ElementId> extra) {
        if (value > incumbent_) {
            incumbent_ = value;
            best_ = path_;
            best_.insert(best_.end(), extra.begin(), extra.end());
        }
    }

    void branch_bound(Frame& f) {
        if (stop_) return;
        if (config_.node_limit != 0 && nodes_ >= config_.node_limit) {
            stop_ = SolveStatus::node_limit;
            return;
        }
        ++nodes_;
        if ((nodes_ & 1023ULL) == 1 && elapsed() >= config_.time_limit_seconds) {
            stop_ = SolveStatus::time_limit;
            return;
        }

        lazy_refresh(counting_, f.cand, f.gain, f.prefix, weights_, f.base, f.budget,
                     incumbent_, config_.lazy_update);

        std::vector<ElementId> entry_candidates;
        if (config_.instrumentation) entry_candidates = f.cand;

        if (config_.reductions && !f.cand.empty()) {
            const ReduceOutcome red = reduce_candidates(f.cand, f.gain, weights_, f.base,
                                                        f.budget, incumbent_, tolerance());
            if (red.kept.size() != f.cand.size()) {
                for (std::size_t k = 0; k < red.kept.size(); ++k) {
                    f.cand[k] = f.cand[red.kept[k]];
                    f.gain[k] = f.gain[red.kept[k]];
                    f.prefix[k] = f.prefix[red.kept[k]];
                }
                f.cand.resize(red.kept.size());
                f.gain.resize(red.kept.size());
                f.prefix.resize(red.kept.size());
            }
        }

        consider_incumbent(f.base, {});

        std::vector<double> cand_weights(f.cand.size());
        for (std::size_t i = 0; i < f.cand.size(); ++i) {
            cand_weights[i] = weights_[f.cand[i]];
        }

        const bool want_entry_view = config_.bound == BoundKind::fractional ||
                                     config_.branching == BranchKind::basic ||
                                     static_cast<bool>(config_.instrumentation);
        SortedGainView entry_view;
        double entry_fk = std::numeric_limits<double>::quiet_NaN();
        if (want_entry_view) {
            entry_view = SortedGainView(f.cand, f.gain, cand_weights);
            entry_fk = f.base + entry_view.bound(f.budget);
        }

        double best_singleton = 0.0;
        if (config_.bound == BoundKind::domination) {
            for (std::size_t i = 0; i < f.cand.size(); ++i) {
                if (cand_weights[i] <= f.budget) {
                    best_singleton = std::max(best_singleton, f.gain[i]);
                }
            }
        }

        GreedyAddResult greedy;
        bool greedy_ran = false;
        std::vector<double> work_gain;
        std::vector<std::int32_t> work_prefix;
        if (greedy_needed_ && !f.cand.empty()) {
            work_gain = f.gain;
            work_prefix = f.prefix;
            greedy = greedy_add(counting_, f.cand, work_gain, work_prefix, weights_,
                                f.budget, config_.bound == BoundKind::refined);
            greedy_ran = true;
            if (primal_) {
                consider_incumbent(f.base + greedy.trace.total_gain(),
                                   greedy.trace.selected);
            }
        }

        double ub = f.base;
        switch (config_.bound) {
            case BoundKind::fractional:
                ub = entry_fk;
                break;
            case BoundKind::knapsack: {
                GainProfile profile;
                profile.ids = f.cand;
                profile.gains = f.gain;
                profile.weights = cand_weights;
                profile.budget = f.budget;
                ub = f.base + knapsack_ptas_bound(profile, config_.epsilon);
                break;
            }
            case BoundKind::domination:
                ub = domination_bound(f.base, greedy_ran ? greedy.trace.total_gain() : 0.0,
                                      best_singleton);
                break;
            case BoundKind::refined:
                ub = f.base + (greedy_ran && std::isfinite(greedy.rs_bound_gain)
                                   ? greedy.rs_bound_gain
                                   : 0.0);
                break;
        }
        if (!root_bound_set_) {
            root_bound_ = ub;
            root_bound_set_ = true;
        }

        const bool prune = ub <= incumbent_ + tolerance();

        if (config_.instrumentation) {
            NodeRecord record;
            record.selected = path_;
            record.candidates_entry = std::move(entry_candidates);
            record.candidates = f.cand;
            record.base_value = f.base;
            record.budget = f.budget;
            record.bound_value = ub;
            record.entry_fractional_bound = entry_fk;
            record.refined_bound = config_.bound == BoundKind::refined
                                       ? ub
                                       : std::numeric_limits<double>::quiet_NaN();
            record.pruned = prune;
            record.incumbent = incumbent_;
            if (greedy_ran) {
                record.greedy_ran = true;
                const std::size_t p = greedy.trace.consecutive_prefix;
                record.consecutive_prefix = p;
                record.prefix_gain = greedy.trace.selected_cum_gain[p];
                record.prefix_weight = greedy.trace.selected_cum_weight[p];
                record.greedy_gain = greedy.trace.total_gain();
            }
            config_.instrumentation(record);
        }

        if (prune || f.cand.empty()) return;

        if (config_.branching == BranchKind::basic) {
            branch_basic(f, entry_view, cand_weights);
        } else {
            branch_dual(f, greedy.trace, work_gain, work_prefix);
        }
    }

    void branch_basic(Frame& f, const SortedGainView& view,
                      const std::vector<double>& cand_weights) {
        const std::size_t n = f.cand.size();
        // The i-th cutoff covers every child past the i-th sorted candidate;
        // i == n always triggers because f(S_T) never exceeds the incumbent.
        std::size_t child_count = n;
        for (std::size_t i = 0; i <= n; ++i) {
            if (f.base + view.bound_suffix(i, f.budget) <= incumbent_ + tolerance()) {
                child_count = i;
                break;
            }
        }
        for (std::size_t pos = 0; pos < child_count; ++pos) {
            const std::uint32_t p = view.order()[pos];
            const ElementId c = f.cand[p];
            if (cand_weights[p] > f.budget) continue;  // no feasible superset
            Frame child;
            const std::size_t tail = n - pos - 1;
            child.cand.reserve(tail);
            child.gain.reserve(tail);
            child.prefix.reserve(tail);
            for (std::size_t k = pos + 1; k < n; ++k) {
                const std::uint32_t q = view.order()[k];
                child.cand.push_back(f.cand[q]);
                child.gain.push_back(f.gain[q]);
                child.prefix.push_back(-1);
            }
            child.budget = f.budget - cand_weights[p];
            push_element(c);
            child.base = counting_.anchor_value();
            branch_bound(child);
            pop_element();
            if (stop_) return;
        }
    }

    void branch_dual(Frame& f, const GreedyTrace& trace,
                     std::vector<double>& work_gain,
                     std::vector<std::int32_t>& work_prefix) {
        const std::size_t n = f.cand.size();
        const std::size_t k = trace.selected.size();

        std::vector<std::uint32_t> position(weights_.size(), 0);
        for (std::size_t i = 0; i < n; ++i) position[f.cand[i]] = static_cast<std::uint32_t>(i);

        // Greedy selection order first, then the leftovers by ascending id.
        std::vector<ElementId> order = trace.selected;
        {
            std::vector<ElementId> rest;
            rest.reserve(n - k);
            std::vector<std::uint8_t> in_selected(n, 0);
            for (ElementId e : trace.selected) in_selected[position[e]] = 1;
            for (std::size_t i = 0; i < n; ++i) {
                if (!in_selected[i]) rest.push_back(f.cand[i]);
            }
            std::sort(rest.begin(), rest.end());
            order.insert(order.end(), rest.begin(), rest.end());
        }

        const auto gain_valid_at = [&](ElementId e, std::size_t i) {
            const std::uint32_t p = position[e];
            return work_prefix[p] <= static_cast<std::int32_t>(i) ? work_gain[p]
                                                                  : f.gain[p];
        };

        std::size_t pushed = 0;
        for (std::size_t step = 0; step <= k; ++step) {
            const std::size_t i = step < k ? step + 1 : 0;  // prefix children first, spine last
            const std::size_t from = std::min(i + 1, n);
            while (pushed < i) {
                push_element(order[pushed]);
                ++pushed;
            }
            while (pushed > i) {
                pop_element();
                --pushed;
            }
            Frame child;
            child.cand.reserve(n - from);
            child.gain.reserve(n - from);
            child.prefix.reserve(n - from);
            for (std::size_t j = from; j < n; ++j) {
                const ElementId e = order[j];
                const std::uint32_t p = position[e];
                if (work_prefix[p] <= static_cast<std::int32_t>(i)) {
                    child.cand.push_back(e);
                    child.gain.push_back(work_gain[p]);
                    child.prefix.push_back(
                        work_prefix[p] == static_cast<std::int32_t>(i) ? 0 : -1);
                } else {
                    // Refreshed past this prefix during greedy; fall back to
                    // the entry value, which stays a valid upper bound.
                    child.cand.push_back(e);
                    child.gain.push_back(f.gain[p]);
                    child.prefix.push_back(i == 0 && f.prefix[p] == 0 ? 0 : -1);
                }
            }
            child.budget = f.budget - trace.selected_cum_weight[i];
            child.base = counting_.anchor_value();
            // Generation tests of the branching scheme, sharing the gains the
            // child would refresh at entry anyway. The tail test covers every
            // deeper child and ends the branching; the child test skips this
            // child alone. Refreshed values ride along into a visited child.
            lazy_refresh(counting_, child.cand, child.gain, child.prefix, weights_,
                         child.base, child.budget, incumbent_, config_.lazy_update);
            // Gains refreshed at prefix i stay valid upper bounds for every
            // deeper sibling; feed them back so later generation tests reuse
            // them instead of re-querying.
            for (std::size_t j = 0; j < child.cand.size(); ++j) {
                if (child.prefix[j] != 0) continue;
                const std::uint32_t p = position[child.cand[j]];
                if (work_prefix[p] != 0 &&
                    work_prefix[p] <= static_cast<std::int32_t>(i)) {
                    work_gain[p] = child.gain[j];
                    work_prefix[p] = static_cast<std::int32_t>(i);
                }
            }
            GainProfile profile;
            profile.ids = child.cand;
            profile.gains = child.gain;
            profile.weights = gather_weights(child.cand);
            profile.budget = child.budget;
            const double child_bound = fractional_knapsack_bound(profile);
            if (child.base + child_bound <= incumbent_ + tolerance()) {
                if (i < n) {
                    // Augmented with the dropped element, the same bound
                    // covers this child and every deeper prefix child; the
                    // spine child T_0 sits outside that space, so jump to it
                    // instead of breaking while it is still pending.
                    const ElementId dropped = order[i];
                    profile.ids.push_back(dropped);
                    profile.gains.push_back(gain_valid_at(dropped, i));
                    profile.weights.push_back(weights_[dropped]);
                    const double tail_bound = fractional_knapsack_bound(profile);
                    if (tail_bound + child.base <= incumbent_ + tolerance()) {
                        if (i == 0) break;
                        step = k - 1;
                        continue;
                    }
                }
                continue;
            }
            branch_bound(child);
            if (stop_) break;
        }
        for (std::size_t i = 0; i < pushed; ++i) pop_element();
    }

    CountingOracle counting_;
    std::span<const double> weights_;
    double total_budget_;
    SolverConfig config_;
    bool primal_;
    bool greedy_needed_;
    bool integral_;

    double incumbent_ = 0.0;
    std::vector<ElementId> best_;
    std::vector<ElementId> path_;
    std::uint64_t nodes_ = 0;
    std::optional<SolveStatus> stop_;
    double root_bound_ = std::numeric_limits<double>::quiet_NaN();
    bool root_bound_set_ = false;
    std::chrono::steady_clock::time_point start_;
};

void validate_problem(const SubmodularOracle& oracle, std::span<const double> weights,
                      double budget) {
    if (weights.size() != oracle.universe_size()) {
        throw std::invalid_argument("one weight per element required");
    }
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("element weights must be positive finite");
        }
    }
    if (!(budget >= 0.0) || !std::isfinite(budget)) {
        throw std::invalid_argument("budget must be nonnegative finite");
    }
}

}  // namespace

SolveReport solve(SubmodularOracle& oracle, std::span<const double> weights,
                  double budget, const SolverConfig& config) {
    validate_config(config);
    validate_problem(oracle, weights, budget);
    std::vector<ElementId> all(oracle.universe_size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<ElementId>(i);
    return Engine(oracle, weights, budget, config).run({}, all);
}

SolveReport solve_node(SubmodularOracle& oracle, std::span<const double> weights,
                       double budget, std::span<const ElementId> selected,
                       std::span<const ElementId> candidates,
                       const SolverConfig& config) {
    validate_config(config);
    validate_problem(oracle, weights, budget);
    return Engine(oracle, weights, budget, config).run(selected, candidates);
}

}  // namespace skp
