#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "skp/instance.hpp"
#include "skp/report.hpp"
#include "skp/solver.hpp"

namespace {

enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("SKP_LOG");
        if (env == nullptr) return LogLevel::error;
        const std::string value = env;
        if (value == "debug") return LogLevel::debug;
        if (value == "info") return LogLevel::info;
        return LogLevel::error;
    }();
    return level;
}

void log_info(const std::string& message) {
    if (log_level() >= LogLevel::info) std::cerr << "[info] " << message << '\n';
}

struct SolveFlags {
    std::string instance_path;
    std::string bound = "rs";
    std::string branch = "dual";
    double epsilon = 1.0;
    double budget_override = 0.0;
    bool has_budget_override = false;
    double time_limit = 1800.0;
    std::uint64_t node_limit = 0;
    bool no_primal = false;
    bool no_lazy = false;
    bool no_reduce = false;
    std::string format = "json";
};

void add_solver_flags(CLI::App& cmd, SolveFlags& flags, bool with_format) {
    cmd.add_option("--instance", flags.instance_path, "instance file")->required();
    cmd.add_option("--bound", flags.bound, "upper bound: k, fk, dom, rs")
        ->check(CLI::IsMember({"k", "fk", "dom", "rs"}));
    cmd.add_option("--branch", flags.branch, "branching scheme: basic, dual")
        ->check(CLI::IsMember({"basic", "dual"}));
    cmd.add_option("--epsilon", flags.epsilon, "rounding parameter of the k bound");
    cmd.add_option("--time-limit", flags.time_limit, "wall-clock limit in seconds");
    cmd.add_option("--node-limit", flags.node_limit, "search node limit (0 = none)");
    cmd.add_flag("--no-primal", flags.no_primal, "disable greedy incumbent updates");
    cmd.add_flag("--no-lazy", flags.no_lazy, "recompute every marginal gain at each node");
    cmd.add_flag("--no-reduce", flags.no_reduce, "disable candidate reductions");
    if (with_format) {
        cmd.add_option("--format", flags.format, "report format")
            ->check(CLI::IsMember({"json", "csv-row"}));
    }
}

skp::SolverConfig make_config(const SolveFlags& flags) {
    skp::SolverConfig config;
    config.bound = *skp::bound_from_string(flags.bound);
    config.branching = *skp::branch_from_string(flags.branch);
    config.epsilon = flags.epsilon;
    if (flags.no_primal) config.primal_heuristic = false;
    config.lazy_update = !flags.no_lazy;
    config.reductions = !flags.no_reduce;
    config.time_limit_seconds = flags.time_limit;
    config.node_limit = flags.node_limit;
    skp::validate_config(config);
    return config;
}

int exit_code_for(skp::SolveStatus status) {
    return status == skp::SolveStatus::optimal ? 0 : 2;
}

int run_solve(const SolveFlags& flags) {
    skp::Instance instance = skp::load_instance(flags.instance_path);
    const skp::SolverConfig config = make_config(flags);
    const double budget = flags.has_budget_override ? flags.budget_override
                                                    : instance.budget;
    if (!(budget > 0.0)) throw std::invalid_argument("budget must be positive");
    log_info("solving " + flags.instance_path + " (" +
             std::string(skp::to_string(instance.kind)) + ", n=" +
             std::to_string(instance.n) + ", W=" + std::to_string(budget) + ")");

    const skp::SolveReport report =
        skp::solve(*instance.oracle, instance.weights, budget, config);
    const std::optional<double> override =
        flags.has_budget_override ? std::optional<double>(budget) : std::nullopt;
    if (flags.format == "csv-row") {
        std::cout << skp::report_csv_row(report, instance, config, override) << '\n';
    } else {
        std::cout << skp::report_json(report, instance, config, override) << '\n';
    }
    return exit_code_for(report.status);
}

int run_sweep(const SolveFlags& flags, int w_from, int w_to, bool early_stop) {
    skp::Instance instance = skp::load_instance(flags.instance_path);
    const skp::SolverConfig config = make_config(flags);
    int code = 0;
    bool header_done = false;
    for (int w = w_from; w <= w_to; ++w) {
        const double budget = static_cast<double>(w);
        log_info("sweep W=" + std::to_string(w));
        const skp::SolveReport report =
            skp::solve(*instance.oracle, instance.weights, budget, config);
        if (!header_done) {
            std::cout << skp::report_csv_header() << '\n';
            header_done = true;
        }
        std::cout << skp::report_csv_row(report, instance, config, budget) << '\n';
        if (report.status != skp::SolveStatus::optimal) {
            code = 2;
            if (early_stop) break;
        }
    }
    return code;
}

int run_verify(const std::string& path, double budget_override, bool has_override,
               double time_limit, double epsilon) {
    skp::Instance instance = skp::load_instance(path);
    const double budget = has_override ? budget_override : instance.budget;
    if (!(budget > 0.0)) throw std::invalid_argument("budget must be positive");
    const skp::VerifySummary summary = skp::verify_all_configs(
        *instance.oracle, instance.weights, budget, time_limit, epsilon);

    std::cout << "brute_force optimum=" << summary.brute_optimum
              << " set_size=" << summary.brute_solution.size() << '\n';
    std::size_t agreed = 0;
    std::size_t compared = 0;
    for (const skp::VerifyRow& row : summary.rows) {
        std::cout << skp::to_string(row.bound) << '/' << skp::to_string(row.branching)
                  << " status=" << skp::to_string(row.report.status)
                  << " optimum=" << row.report.optimum
                  << " nodes=" << row.report.nodes_visited << " agree="
                  << (row.compared ? (row.agrees ? "yes" : "NO") : "skipped") << '\n';
        compared += row.compared ? 1 : 0;
        agreed += row.compared && row.agrees ? 1 : 0;
    }
    std::cout << (summary.pass ? "PASS " : "FAIL ") << agreed << '/' << compared
              << " compared configurations agree with brute force" << '\n';
    return summary.pass ? 0 : 1;
}

int run_gaps(const std::string& path, double budget_override, bool has_override,
             double epsilon) {
    skp::Instance instance = skp::load_instance(path);
    if (has_override) {
        if (!(budget_override > 0.0)) {
            throw std::invalid_argument("budget must be positive");
        }
        instance.budget = budget_override;
    }
    const skp::BoundKind kinds[] = {skp::BoundKind::knapsack, skp::BoundKind::fractional,
                                    skp::BoundKind::domination, skp::BoundKind::refined};
    const skp::GapStats stats = skp::gap_stats(instance, kinds, epsilon);
    std::cout << "bound,root_bound,gap\n";
    for (std::size_t i = 0; i < 4; ++i) {
        std::cout << skp::to_string(kinds[i]) << ',' << stats.bounds[i] << ',';
        if (stats.gaps[i].has_value()) {
            std::cout << *stats.gaps[i];
        } else {
            std::cout << "NA";
        }
        std::cout << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact branch-and-bound solver for the submodular knapsack problem"};
    app.require_subcommand(1);

    SolveFlags solve_flags;
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve one instance");
    add_solver_flags(*solve_cmd, solve_flags, true);
    CLI::Option* solve_budget =
        solve_cmd->add_option("--budget", solve_flags.budget_override,
                              "override the instance budget");

    SolveFlags sweep_flags;
    int w_from = 1;
    int w_to = 0;
    bool early_stop = false;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "solve for a range of budgets");
    add_solver_flags(*sweep_cmd, sweep_flags, false);
    sweep_cmd->add_option("--w-from", w_from, "first budget")->required();
    sweep_cmd->add_option("--w-to", w_to, "last budget")->required();
    sweep_cmd->add_flag("--early-stop", early_stop, "stop after the first limit hit");

    std::string gen_kind = "cov";
    skp::GenerateParams gen_params;
    std::uint64_t gen_seed = 0;
    std::string gen_scheme = "unit";
    std::string gen_output;
    CLI::App* gen_cmd = app.add_subcommand("generate", "emit a random instance");
    gen_cmd->add_option("--kind", gen_kind, "cov, inf, loc, dom")
        ->check(CLI::IsMember({"cov", "inf", "loc", "dom"}));
    gen_cmd->add_option("--n", gen_params.n, "universe size");
    gen_cmd->add_option("--m", gen_params.m, "items / targets / customers");
    gen_cmd->add_option("--density", gen_params.density, "membership or edge probability");
    gen_cmd->add_option("--scheme", gen_scheme, "weight scheme")
        ->check(CLI::IsMember({"normal", "uniform", "unit"}));
    gen_cmd->add_option("--weight-seed", gen_params.weight_seed, "weight stream seed");
    gen_cmd->add_option("--seed", gen_seed, "structure seed");
    gen_cmd->add_option("--budget", gen_params.budget, "budget W");
    gen_cmd->add_option("--output", gen_output, "output path (stdout when omitted)");

    std::string verify_path;
    double verify_budget = 0.0;
    double verify_time_limit = 1800.0;
    double verify_epsilon = 1.0;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "check all configurations against brute force");
    verify_cmd->add_option("--instance", verify_path, "instance file")->required();
    CLI::Option* verify_budget_opt =
        verify_cmd->add_option("--budget", verify_budget, "override the instance budget");
    verify_cmd->add_option("--time-limit", verify_time_limit, "per-config limit");
    verify_cmd->add_option("--epsilon", verify_epsilon, "k-bound rounding parameter");

    std::string gaps_path;
    double gaps_budget = 0.0;
    double gaps_epsilon = 1.0;
    CLI::App* gaps_cmd =
        app.add_subcommand("gaps", "root-bound tightness against brute force");
    gaps_cmd->add_option("--instance", gaps_path, "instance file")->required();
    CLI::Option* gaps_budget_opt =
        gaps_cmd->add_option("--budget", gaps_budget, "override the instance budget");
    gaps_cmd->add_option("--epsilon", gaps_epsilon, "k-bound rounding parameter");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) {
            solve_flags.has_budget_override = solve_budget->count() > 0;
            return run_solve(solve_flags);
        }
        if (sweep_cmd->parsed()) {
            return run_sweep(sweep_flags, w_from, w_to, early_stop);
        }
        if (gen_cmd->parsed()) {
            const skp::Instance instance = skp::generate_random_instance(
                *skp::kind_from_string(gen_kind), [&] {
                    skp::GenerateParams p = gen_params;
                    p.scheme = *skp::scheme_from_string(gen_scheme);
                    return p;
                }(), gen_seed);
            const std::string text = skp::serialize_instance(instance);
            if (gen_output.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(gen_output, std::ios::binary);
                if (!out) throw std::runtime_error("cannot write '" + gen_output + "'");
                out << text;
            }
            return 0;
        }
        if (verify_cmd->parsed()) {
            return run_verify(verify_path, verify_budget, verify_budget_opt->count() > 0,
                              verify_time_limit, verify_epsilon);
        }
        if (gaps_cmd->parsed()) {
            return run_gaps(gaps_path, gaps_budget, gaps_budget_opt->count() > 0,
                            gaps_epsilon);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
