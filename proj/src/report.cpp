#include "skp/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "skp/bounds.hpp"

namespace skp {

namespace {

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string fmt(double v, const char* spec = "%.17g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace

std::string report_json(const SolveReport& report, const Instance& instance,
                        const SolverConfig& config,
                        std::optional<double> budget_override) {
    nlohmann::ordered_json j;
    j["instance"] = hash_hex(instance_fingerprint(instance, budget_override));
    j["kind"] = to_string(instance.kind);
    j["n"] = instance.n;
    j["budget"] = budget_override.value_or(instance.budget);
    j["scheme"] = to_string(instance.weight_scheme);
    j["seed"] = instance.weight_seed;
    j["config"] = {
        {"bound", to_string(config.bound)},
        {"branching", to_string(config.branching)},
        {"epsilon", config.epsilon},
        {"primal", primal_enabled(config)},
        {"lazy", config.lazy_update},
        {"reductions", config.reductions},
        {"time_limit_s", config.time_limit_seconds},
        {"node_limit", config.node_limit},
    };
    j["status"] = to_string(report.status);
    j["optimum"] = report.optimum;
    j["solution"] = report.solution;
    j["root_bound"] =
        std::isfinite(report.root_bound) ? nlohmann::ordered_json(report.root_bound)
                                         : nlohmann::ordered_json(nullptr);
    j["nodes"] = report.nodes_visited;
    j["oracle_calls"] = report.oracle_calls;
    j["wall_s"] = report.wall_seconds;
    return j.dump();
}

std::string report_csv_header() {
    return "instance_hash,kind,n,W,scheme,seed,bound,branching,status,optimum,"
           "root_bound,nodes,oracle_calls,wall_s";
}

std::string report_csv_row(const SolveReport& report, const Instance& instance,
                           const SolverConfig& config,
                           std::optional<double> budget_override) {
    std::string row;
    row += hash_hex(instance_fingerprint(instance, budget_override));
    row += ',';
    row += to_string(instance.kind);
    row += ',';
    row += std::to_string(instance.n);
    row += ',';
    row += fmt(budget_override.value_or(instance.budget));
    row += ',';
    row += to_string(instance.weight_scheme);
    row += ',';
    row += std::to_string(instance.weight_seed);
    row += ',';
    row += to_string(config.bound);
    row += ',';
    row += to_string(config.branching);
    row += ',';
    row += to_string(report.status);
    row += ',';
    row += fmt(report.optimum);
    row += ',';
    row += std::isfinite(report.root_bound) ? fmt(report.root_bound) : "NA";
    row += ',';
    row += std::to_string(report.nodes_visited);
    row += ',';
    row += std::to_string(report.oracle_calls);
    row += ',';
    row += fmt(report.wall_seconds, "%.6f");
    return row;
}

GapStats gap_stats(Instance& instance, std::span<const BoundKind> bounds,
                   double epsilon) {
    SubmodularOracle& oracle = *instance.oracle;
    const std::size_t n = instance.n;
    GapStats stats;
    stats.optimum = brute_force(oracle, instance.weights, instance.budget).first;

    std::vector<ElementId> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<ElementId>(i);

    oracle.anchor_clear();
    GainProfile profile;
    profile.budget = instance.budget;
    profile.ids = all;
    profile.weights = instance.weights;
    profile.gains.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        profile.gains[i] = clamp_gain(oracle.anchor_gain(all[i]));
    }

    for (BoundKind kind : bounds) {
        double ub = 0.0;
        switch (kind) {
            case BoundKind::fractional:
                ub = fractional_knapsack_bound(profile);
                break;
            case BoundKind::knapsack:
                ub = knapsack_ptas_bound(profile, epsilon);
                break;
            case BoundKind::domination:
            case BoundKind::refined: {
                std::vector<double> gains = profile.gains;
                std::vector<std::int32_t> prefixes(n, 0);
                oracle.anchor_clear();
                const GreedyAddResult greedy =
                    greedy_add(oracle, all, gains, prefixes, instance.weights,
                               instance.budget, false);
                if (kind == BoundKind::domination) {
                    double best_single = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        if (instance.weights[i] <= instance.budget) {
                            best_single = std::max(best_single, profile.gains[i]);
                        }
                    }
                    ub = domination_bound(0.0, greedy.trace.total_gain(), best_single);
                } else {
                    ub = refined_subset_bound(oracle, {}, all, instance.weights,
                                              instance.budget, greedy.trace);
                }
                break;
            }
        }
        stats.bounds.push_back(ub);
        if (stats.optimum != 0.0) {
            stats.gaps.push_back((ub - stats.optimum) / stats.optimum);
        } else {
            stats.gaps.push_back(std::nullopt);
        }
    }
    return stats;
}

VerifySummary verify_all_configs(SubmodularOracle& oracle,
                                 std::span<const double> weights, double budget,
                                 double time_limit_seconds, double epsilon) {
    VerifySummary summary;
    auto [best, best_set] = brute_force(oracle, weights, budget);
    summary.brute_optimum = best;
    summary.brute_solution = std::move(best_set);

    const double tol = oracle.integral_valued()
                           ? 0.0
                           : 1e-9 * std::max(1.0, std::abs(summary.brute_optimum));
    for (BoundKind bound : {BoundKind::knapsack, BoundKind::fractional,
                            BoundKind::domination, BoundKind::refined}) {
        for (BranchKind branching : {BranchKind::basic, BranchKind::dual}) {
            SolverConfig config;
            config.bound = bound;
            config.branching = branching;
            config.epsilon = epsilon;
            config.time_limit_seconds = time_limit_seconds;
            VerifyRow row;
            row.bound = bound;
            row.branching = branching;
            row.report = solve(oracle, weights, budget, config);
            if (row.report.status == SolveStatus::optimal) {
                row.compared = true;
                row.agrees = std::abs(row.report.optimum - summary.brute_optimum) <= tol;
                summary.pass = summary.pass && row.agrees;
            }
            summary.rows.push_back(std::move(row));
        }
    }
    return summary;
}

}  // namespace skp
