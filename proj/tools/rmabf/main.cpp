// rmabf — command-line front end: offline planning, Monte-Carlo learning runs,
// the asymptotic-optimality sweep, and the brute-force oracle cross-check.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rmabf/config.hpp"
#include "rmabf/csv.hpp"

namespace {

int log_level() {
    const char* env = std::getenv("RMABF_LOG");
    if (env == nullptr) return 0;
    const std::string value(env);
    if (value == "debug") return 2;
    if (value == "info") return 1;
    return 0;
}

void log_info(const std::string& message) {
    if (log_level() >= 1) std::cerr << "[rmabf] " << message << "\n";
}

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string algo;
    int trials = -1;
    long long seed = -1;
    int jobs = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_run_options) {
    cmd->add_option("--config", args.config_path, "JSON experiment config")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_path, "output CSV path")->required();
    if (with_run_options) {
        cmd->add_option("--algo", args.algo,
                        "algorithm override (fair-ucrl, g-fair-ucrl, oracle-index, "
                        "random)");
        cmd->add_option("--trials", args.trials, "Monte-Carlo trials override");
        cmd->add_option("--seed", args.seed, "master seed override");
        cmd->add_option("--jobs", args.jobs, "worker threads")
            ->check(CLI::PositiveNumber);
    }
}

rmabf::ExperimentConfig load_with_overrides(const CommonArgs& args) {
    rmabf::ExperimentConfig config = rmabf::load_config(args.config_path);
    if (!args.algo.empty()) config.algorithm = rmabf::parse_algorithm(args.algo);
    if (args.trials >= 1) config.trials = args.trials;
    if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
    return config;
}

void run_plan(const CommonArgs& args) {
    const rmabf::ExperimentConfig config = load_with_overrides(args);
    const rmabf::PlanResult plan =
        rmabf::solve_plan(rmabf::exact_confidence_model(config.instance),
                          config.instance.budget, config.instance.eta,
                          /*include_fairness=*/true);
    log_info("offline LP value " + rmabf::format_number(plan.objective));
    const rmabf::IndexTable indices = rmabf::fair_indices(plan.occupancy);
    rmabf::write_csv_file(args.out_path, [&](std::ostream& out) {
        rmabf::write_plan_csv(indices, plan.occupancy, out);
    });
}

void run_learn(const CommonArgs& args) {
    const rmabf::ExperimentConfig config = load_with_overrides(args);
    rmabf::BenchmarkOptions bench_options;
    bench_options.seed = config.seed ^ 0x42454E4348ULL;  // decorrelate from trials
    bench_options.jobs = args.jobs;
    const rmabf::OfflineBenchmark benchmark =
        rmabf::offline_benchmark(config.instance, bench_options);
    log_info("LP bound " + rmabf::format_number(benchmark.lp_bound) +
             ", index benchmark " + rmabf::format_number(benchmark.index_value));

    rmabf::MonteCarloOptions mc_options;
    mc_options.trials = config.trials;
    mc_options.jobs = args.jobs;
    const rmabf::AggregateMetrics metrics =
        rmabf::run_monte_carlo(config.instance, config.learner_config(),
                               config.algorithm, benchmark, mc_options);
    rmabf::write_csv_file(args.out_path, [&](std::ostream& out) {
        rmabf::write_learn_csv(metrics, out);
    });
}

void run_sweep(const CommonArgs& args) {
    const rmabf::ExperimentConfig config = load_with_overrides(args);
    rmabf::SweepOptions options;
    options.replicas = config.replicas;
    options.horizon = config.episodes * config.horizon;
    options.trials = config.trials;
    options.seed = config.seed;
    options.jobs = args.jobs;
    const std::vector<rmabf::SweepPoint> points =
        rmabf::optimality_gap_sweep(config.instance, options);
    rmabf::write_csv_file(args.out_path, [&](std::ostream& out) {
        rmabf::write_sweep_csv(points, out);
    });
}

void run_oracle(const CommonArgs& args) {
    const rmabf::ExperimentConfig config = load_with_overrides(args);
    const rmabf::LpSolution sol =
        rmabf::solve_lp(rmabf::build_offline_lp(config.instance));
    if (sol.status != rmabf::SolveStatus::Optimal) {
        throw rmabf::RmabError("oracle: offline LP is not solvable for this instance");
    }
    const double brute =
        rmabf::brute_force_value(config.instance, config.oracle_grid);
    log_info("LP " + rmabf::format_number(sol.objective_value) + " vs brute force " +
             rmabf::format_number(brute));
    rmabf::write_csv_file(args.out_path, [&](std::ostream& out) {
        rmabf::write_oracle_csv(sol.objective_value, brute, out);
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Restless bandits with long-term fairness constraints"};
    app.require_subcommand(1);

    CommonArgs plan_args, learn_args, sweep_args, oracle_args;
    CLI::App* plan = app.add_subcommand("plan", "offline LP + index table dump");
    add_common(plan, plan_args, /*with_run_options=*/false);
    CLI::App* learn = app.add_subcommand("learn", "Monte-Carlo learning run");
    add_common(learn, learn_args, /*with_run_options=*/true);
    CLI::App* sweep = app.add_subcommand("sweep", "optimality-gap sweep");
    add_common(sweep, sweep_args, /*with_run_options=*/true);
    CLI::App* oracle = app.add_subcommand("oracle", "brute-force cross-check");
    add_common(oracle, oracle_args, /*with_run_options=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message and usage hint
        return 2;
    }

    try {
        if (plan->parsed()) run_plan(plan_args);
        if (learn->parsed()) run_learn(learn_args);
        if (sweep->parsed()) run_sweep(sweep_args);
        if (oracle->parsed()) run_oracle(oracle_args);
    } catch (const std::exception& e) {
        std::cerr << "rmabf: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
