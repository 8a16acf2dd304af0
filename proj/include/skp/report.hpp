#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skp/instance.hpp"
#include "skp/solver.hpp"

namespace skp {

// Serialized forms of a completed solve. JSON fields keep a stable order;
// the CSV column order is:
//   instance_hash, kind, n, W, scheme, seed, bound, branching, status,
//   optimum, root_bound, nodes, oracle_calls, wall_s
// budget_override must match the budget the solve actually ran with; it feeds
// both the W column and the instance fingerprint so sweep rows join cleanly.
std::string report_json(const SolveReport& report, const Instance& instance,
                        const SolverConfig& config,
                        std::optional<double> budget_override = {});
std::string report_csv_row(const SolveReport& report, const Instance& instance,
                           const SolverConfig& config,
                           std::optional<double> budget_override = {});
std::string report_csv_header();

// Root-gap study: (ub - s*) / s* per requested bound, with s* from the
// brute-force oracle. Gaps are undefined when s* == 0 and reported as nullopt
// (JSON null / "NA" in text output).
struct GapStats {
    double optimum = 0.0;
    std::vector<double> bounds;                // root bound per requested kind
    std::vector<std::optional<double>> gaps;   // parallel to `bounds`
};
GapStats gap_stats(Instance& instance, std::span<const BoundKind> bounds,
                   double epsilon = 1.0);

// Runs brute force plus every bound x branching configuration and compares
// optima. Rows that hit a limit are reported but not compared.
struct VerifyRow {
    BoundKind bound = BoundKind::refined;
    BranchKind branching = BranchKind::dual;
    SolveReport report;
    bool compared = false;
    bool agrees = true;
};
struct VerifySummary {
    double brute_optimum = 0.0;
    std::vector<ElementId> brute_solution;
    std::vector<VerifyRow> rows;
    bool pass = true;
};
VerifySummary verify_all_configs(SubmodularOracle& oracle,
                                 std::span<const double> weights, double budget,
                                 double time_limit_seconds = 1800.0,
                                 double epsilon = 1.0);

}  // namespace skp
