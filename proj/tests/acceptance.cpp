#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "skp/bounds.hpp"
#include "skp/instance.hpp"
#include "skp/report.hpp"
#include "skp/solver.hpp"
#include "support.hpp"

using namespace skp;

namespace {

constexpr double kRelTol = 1e-9;

struct SuiteEntry {
    Instance instance;
    double optimum = 0.0;  // brute force
};

// 200 deterministic instances: 50 per family, universes of 6..18 elements,
// the three weight schemes cycling, budgets 1..4.5.
std::vector<SuiteEntry>& exactness_suite() {
    static std::vector<SuiteEntry> suite = [] {
        std::vector<SuiteEntry> built;
        const ProblemKind kinds[] = {ProblemKind::cov, ProblemKind::inf,
                                     ProblemKind::loc, ProblemKind::dom};
        const WeightScheme schemes[] = {WeightScheme::normal, WeightScheme::uniform,
                                        WeightScheme::unit};
        for (ProblemKind kind : kinds) {
            for (std::size_t i = 0; i < 50; ++i) {
                GenerateParams params;
                params.n = 6 + (i % 13);
                params.m = params.n + 2 + (i % 5);
                params.density = 0.18 + 0.05 * static_cast<double>(i % 5);
                params.scheme = schemes[i % 3];
                params.weight_seed = i;
                params.budget = 1.0 + 0.5 * static_cast<double>(i % 8);
                SuiteEntry entry;
                entry.instance = generate_random_instance(kind, params, i);
                entry.optimum = brute_force(*entry.instance.oracle,
                                            entry.instance.weights,
                                            entry.instance.budget)
                                    .first;
                built.push_back(std::move(entry));
            }
        }
        return built;
    }();
    return suite;
}

double value_tolerance(const Instance& instance, double reference) {
    return instance.oracle->integral_valued()
               ? 0.0
               : kRelTol * std::max(1.0, std::abs(reference));
}

std::vector<SolverConfig> all_eight_configs() {
    std::vector<SolverConfig> configs;
    for (BoundKind bound : {BoundKind::knapsack, BoundKind::fractional,
                            BoundKind::domination, BoundKind::refined}) {
        for (BranchKind branching : {BranchKind::basic, BranchKind::dual}) {
            SolverConfig config;
            config.bound = bound;
            config.branching = branching;
            configs.push_back(config);
        }
    }
    return configs;
}

void report_criterion(int number, bool ok, const char* detail) {
    std::printf("[criterion %d] %s - %s\n", number, ok ? "PASS" : "FAIL", detail);
    std::fflush(stdout);
}

GainProfile root_profile(Instance& instance) {
    instance.oracle->anchor_clear();
    GainProfile profile;
    profile.budget = instance.budget;
    profile.weights = instance.weights;
    for (std::size_t i = 0; i < instance.n; ++i) {
        profile.ids.push_back(static_cast<ElementId>(i));
        profile.gains.push_back(
            clamp_gain(instance.oracle->anchor_gain(static_cast<ElementId>(i))));
    }
    return profile;
}

}  // namespace

TEST_CASE("criterion 1: every configuration matches brute force") {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::size_t solves = 0;
    for (SuiteEntry& entry : exactness_suite()) {
        const double tol = value_tolerance(entry.instance, entry.optimum);
        for (const SolverConfig& config : all_eight_configs()) {
            const SolveReport report = solve(*entry.instance.oracle,
                                             entry.instance.weights,
                                             entry.instance.budget, config);
            ++solves;
            const bool good = report.status == SolveStatus::optimal &&
                              std::abs(report.optimum - entry.optimum) <= tol;
            if (!good) {
                CAPTURE(to_string(entry.instance.kind));
                CAPTURE(to_string(config.bound));
                CAPTURE(to_string(config.branching));
                CHECK(report.optimum == entry.optimum);
                ok = false;
            }
        }
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ok = ok && elapsed < 300.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "%zu solves across 200 instances agree with brute force in %.1f s",
                  solves, elapsed);
    report_criterion(1, ok, detail);
    CHECK(ok);
}

TEST_CASE("criterion 2: bound validity, dominance and the rounding sandwich") {
    bool roots_ok = true;
    bool sandwich_ok = true;
    bool dominance_ok = true;
    std::size_t dominance_nodes = 0;

    const BoundKind kinds[] = {BoundKind::knapsack, BoundKind::fractional,
                               BoundKind::domination, BoundKind::refined};
    for (SuiteEntry& entry : exactness_suite()) {
        Instance& instance = entry.instance;
        const double tol = kRelTol * std::max(1.0, std::abs(entry.optimum));

        const GapStats stats = gap_stats(instance, kinds);
        for (double ub : stats.bounds) {
            if (!(ub >= entry.optimum - tol)) {
                CAPTURE(to_string(instance.kind));
                CHECK(ub >= entry.optimum - tol);
                roots_ok = false;
            }
        }

        // rounding bound against the enumerated knapsack optimum over the
        // root profile, fitting candidates only
        const GainProfile profile = root_profile(instance);
        std::vector<double> fit_gains;
        std::vector<double> fit_weights;
        for (std::size_t i = 0; i < profile.ids.size(); ++i) {
            if (profile.weights[i] <= profile.budget) {
                fit_gains.push_back(profile.gains[i]);
                fit_weights.push_back(profile.weights[i]);
            }
        }
        const double exact_ip =
            testsupport::exact_knapsack(fit_gains, fit_weights, profile.budget);
        for (double eps : {0.1, 1.0}) {
            const double v = knapsack_ptas_bound(profile, eps);
            const bool good = v >= exact_ip - 1e-9 && v <= (1.0 + eps) * exact_ip + 1e-9;
            if (!good) {
                CAPTURE(to_string(instance.kind));
                CAPTURE(eps);
                CHECK(good);
                sandwich_ok = false;
            }
        }

        // refined <= fractional at every instrumented node, both branchings
        for (BranchKind branching : {BranchKind::basic, BranchKind::dual}) {
            SolverConfig config;
            config.branching = branching;
            config.instrumentation = [&](const NodeRecord& record) {
                ++dominance_nodes;
                if (!(record.refined_bound <=
                      record.entry_fractional_bound + 1e-9)) {
                    dominance_ok = false;
                }
            };
            solve(*instance.oracle, instance.weights, instance.budget, config);
        }
    }
    CHECK(roots_ok);
    CHECK(sandwich_ok);
    CHECK(dominance_ok);
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "root bounds valid, rounding within (1+eps), refined <= fractional "
                  "at %zu nodes",
                  dominance_nodes);
    report_criterion(2, roots_ok && sandwich_ok && dominance_ok, detail);
}

TEST_CASE("criterion 3: consecutive-prefix tightness guarantee") {
    bool ok = true;
    std::size_t checked = 0;
    std::size_t corollary_checked = 0;
    for (SuiteEntry& entry : exactness_suite()) {
        Instance& instance = entry.instance;
        const bool unit_weights = instance.weight_scheme == WeightScheme::unit;
        SolverConfig config;  // dual-rs
        config.instrumentation = [&](const NodeRecord& r) {
            if (!r.greedy_ran || r.consecutive_prefix == 0 || r.prefix_weight <= 0.0) {
                return;
            }
            const double excess = r.refined_bound - r.base_value;
            const double denom = 1.0 - std::exp(-r.prefix_weight / r.budget);
            ++checked;
            if (!(excess <= r.prefix_gain / denom + 1e-9)) ok = false;
            // cardinality corollary: greedy consumed the whole budget in
            // consecutive unit-weight additions
            if (unit_weights && r.prefix_weight == r.budget) {
                ++corollary_checked;
                const double limit = r.greedy_gain / (1.0 - std::exp(-1.0));
                if (!(excess <= limit + 1e-9)) ok = false;
            }
        };
        solve(*instance.oracle, instance.weights, instance.budget, config);
    }
    ok = ok && checked > 0 && corollary_checked > 0;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "held at %zu prefix nodes, cardinality corollary at %zu",
                  checked, corollary_checked);
    report_criterion(3, ok, detail);
    CHECK(ok);
}

TEST_CASE("criterion 4: greedy approximation guarantee") {
    bool ok = true;
    const double alpha = greedy_approximation_ratio();
    for (SuiteEntry& entry : exactness_suite()) {
        Instance& instance = entry.instance;
        const GainProfile profile = root_profile(instance);
        double best_singleton = 0.0;
        for (std::size_t i = 0; i < profile.ids.size(); ++i) {
            if (profile.weights[i] <= profile.budget) {
                best_singleton = std::max(best_singleton, profile.gains[i]);
            }
        }
        std::vector<double> gains = profile.gains;
        std::vector<std::int32_t> prefixes(instance.n, 0);
        instance.oracle->anchor_clear();
        const auto greedy =
            greedy_add(*instance.oracle, profile.ids, gains, prefixes,
                       instance.weights, instance.budget, false);
        const double achieved = std::max(greedy.trace.total_gain(), best_singleton);
        if (!(achieved >= alpha * entry.optimum - 1e-9)) {
            CAPTURE(to_string(instance.kind));
            CHECK(achieved >= alpha * entry.optimum - 1e-9);
            ok = false;
        }
    }
    report_criterion(4, ok, "max(greedy, best singleton) >= (1 - 1/sqrt(e)) * optimum");
    CHECK(ok);
}

TEST_CASE("criterion 5: toggles change nothing observable") {
    bool ok = true;
    for (SuiteEntry& entry : exactness_suite()) {
        Instance& instance = entry.instance;
        const double tol = value_tolerance(instance, entry.optimum);

        std::vector<SolverConfig> variants(4);
        variants[1].lazy_update = false;
        variants[2].reductions = false;
        variants[3].branching = BranchKind::basic;
        for (const SolverConfig& config : variants) {
            const SolveReport report =
                solve(*instance.oracle, instance.weights, instance.budget, config);
            if (report.status != SolveStatus::optimal ||
                std::abs(report.optimum - entry.optimum) > tol) {
                CAPTURE(to_string(instance.kind));
                CAPTURE(config.lazy_update);
                CAPTURE(config.reductions);
                CHECK(report.optimum == entry.optimum);
                ok = false;
            }
        }
    }
    report_criterion(
        5, ok, "lazy, reductions and branching toggles keep optimum and status");
    CHECK(ok);
}

TEST_CASE("criterion 6: dual branching visits fewer nodes on larger instances") {
    std::uint64_t basic_nodes = 0;
    std::uint64_t dual_nodes = 0;
    double basic_wall = 0.0;
    double dual_wall = 0.0;
    bool all_optimal = true;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        GenerateParams params;
        params.n = 200;
        params.density = 0.02;
        params.scheme = WeightScheme::normal;
        params.weight_seed = seed;
        params.budget = 14.0;
        Instance instance = generate_random_instance(ProblemKind::dom, params, seed);
        for (BranchKind branching : {BranchKind::basic, BranchKind::dual}) {
            SolverConfig config;
            config.branching = branching;
            const SolveReport report =
                solve(*instance.oracle, instance.weights, instance.budget, config);
            all_optimal = all_optimal && report.status == SolveStatus::optimal;
            if (branching == BranchKind::basic) {
                basic_nodes += report.nodes_visited;
                basic_wall += report.wall_seconds;
            } else {
                dual_nodes += report.nodes_visited;
                dual_wall += report.wall_seconds;
            }
        }
    }
    const double node_ratio =
        static_cast<double>(dual_nodes) / static_cast<double>(basic_nodes);
    const bool ok = all_optimal && node_ratio < 1.0;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "10 DOM instances (n=200): nodes dual/basic = %llu/%llu = %.3f "
                  "(wall ratio %.2f, reported unasserted)",
                  static_cast<unsigned long long>(dual_nodes),
                  static_cast<unsigned long long>(basic_nodes), node_ratio,
                  dual_wall / basic_wall);
    report_criterion(6, ok, detail);
    CHECK(ok);
}

TEST_CASE("criterion 7: mean root gaps order as expected") {
    const BoundKind kinds[] = {BoundKind::knapsack, BoundKind::fractional,
                               BoundKind::refined};
    double sum_k = 0.0;
    double sum_fk = 0.0;
    double sum_rs = 0.0;
    std::size_t counted = 0;
    for (SuiteEntry& entry : exactness_suite()) {
        const GapStats stats = gap_stats(entry.instance, kinds);
        if (!stats.gaps[0].has_value()) continue;  // optimum 0, gap undefined
        sum_k += *stats.gaps[0];
        sum_fk += *stats.gaps[1];
        sum_rs += *stats.gaps[2];
        ++counted;
    }
    const double mean_k = sum_k / static_cast<double>(counted);
    const double mean_fk = sum_fk / static_cast<double>(counted);
    const double mean_rs = sum_rs / static_cast<double>(counted);
    const bool ok = counted > 150 && mean_rs <= mean_fk + 1e-12 &&
                    mean_rs <= mean_k + 1e-12;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "mean gaps over %zu instances: rs %.4f <= fk %.4f, rs <= k %.4f",
                  counted, mean_rs, mean_fk, mean_k);
    report_criterion(7, ok, detail);
    CHECK(ok);
}

TEST_CASE("criterion 8: repeat runs are identical") {
    bool ok = true;
    auto& suite = exactness_suite();
    for (std::size_t idx = 0; idx < suite.size(); idx += 23) {
        Instance& instance = suite[idx].instance;
        for (const BoundKind bound : {BoundKind::refined, BoundKind::knapsack}) {
            SolverConfig config;
            config.bound = bound;
            config.branching =
                bound == BoundKind::refined ? BranchKind::dual : BranchKind::basic;
            const SolveReport a =
                solve(*instance.oracle, instance.weights, instance.budget, config);
            const SolveReport b =
                solve(*instance.oracle, instance.weights, instance.budget, config);
            if (a.optimum != b.optimum || a.nodes_visited != b.nodes_visited ||
                a.oracle_calls != b.oracle_calls) {
                ok = false;
            }
        }
    }
    report_criterion(8, ok, "optimum, node count and oracle calls reproduce exactly");
    CHECK(ok);
}

TEST_CASE("criterion 9: facility-location smoke solve within budget") {
    GenerateParams params;
    params.n = 60;
    params.m = 60;
    params.density = 0.3;
    params.scheme = WeightScheme::unit;
    params.budget = 8.0;
    Instance instance = generate_random_instance(ProblemKind::loc, params, 0);
    SolverConfig config;  // dual-rs defaults
    config.time_limit_seconds = 60.0;
    const SolveReport report =
        solve(*instance.oracle, instance.weights, instance.budget, config);
    const bool ok =
        report.status == SolveStatus::optimal && report.wall_seconds < 60.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "LOC n=60 m=60 W=8 solved to %.0f in %.2f s (%llu nodes)",
                  report.optimum, report.wall_seconds,
                  static_cast<unsigned long long>(report.nodes_visited));
    report_criterion(9, ok, detail);
    CHECK(ok);
}
