// Microbenchmarks for the hot paths: LP solves, episode planning (direct and
// decomposed), arm stepping, and top-B selection.

#include <benchmark/benchmark.h>

#include "rmabf/learner.hpp"

using namespace rmabf;

namespace {

RmabInstance synthetic(int per_class) {
    RmabInstance instance;
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < per_class; ++i) {
            instance.arms.push_back(make_birth_death_arm(3.0 * (c + 1), 5.0, 6, 0.1));
            instance.eta.push_back(0.1 * (c + 1));
            instance.initial_states.push_back(0);
        }
    }
    instance.budget = per_class;
    return instance;
}

void BM_OfflineLpSolve(benchmark::State& state) {
    const RmabInstance instance = synthetic(static_cast<int>(state.range(0)));
    const StandardFormLP lp = build_offline_lp(instance);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_lp(lp));
    }
}
BENCHMARK(BM_OfflineLpSolve)->Arg(1)->Arg(4);

void BM_PlanDirect(benchmark::State& state) {
    const RmabInstance instance = synthetic(1);
    const ConfidenceModel conf = exact_confidence_model(instance);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_plan(conf, instance.budget, instance.eta,
                                            true, PlanMethod::Direct));
    }
}
BENCHMARK(BM_PlanDirect);

void BM_PlanDecomposed(benchmark::State& state) {
    const RmabInstance instance = synthetic(static_cast<int>(state.range(0)));
    ConfidenceModel conf = exact_confidence_model(instance);
    for (double& d : conf.delta) d = 0.2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_plan(conf, instance.budget, instance.eta,
                                            true, PlanMethod::Decomposed));
    }
}
BENCHMARK(BM_PlanDecomposed)->Arg(4)->Arg(10);

void BM_EpisodePlan(benchmark::State& state) {
    const RmabInstance instance = synthetic(10);
    Counts counts = init_counts(instance.num_arms(), instance.num_states());
    LearnerConfig config;
    config.episodes = 40;
    config.horizon = 90;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            plan_episode(counts, 2, config, instance.budget, instance.eta, true));
    }
}
BENCHMARK(BM_EpisodePlan);

void BM_StepArm(benchmark::State& state) {
    const ArmModel arm = make_birth_death_arm(3.0, 5.0, 6, 0.1);
    Rng rng(1);
    int s = 0;
    for (auto _ : state) {
        s = step_arm(arm, s, 1, rng).next_state;
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_StepArm);

void BM_SelectTopB(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    IndexTable idx;
    idx.omega.assign(N, std::vector<double>(6, 0.5));
    std::vector<int> states(N, 2);
    Rng rng(3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(select_top_b(idx, states, N / 3, rng));
    }
}
BENCHMARK(BM_SelectTopB)->Arg(30)->Arg(300);

}  // namespace

BENCHMARK_MAIN();
