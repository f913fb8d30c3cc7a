// Regret computation, Monte-Carlo aggregation across trials, a brute-force
// single-arm oracle, and the asymptotic-optimality (replica-scaling) sweep.

#pragma once

#include <cstdint>
#include <vector>

#include "rmabf/learner.hpp"

namespace rmabf {

/// Policies the harness can evaluate: the two learners plus the reference
/// baselines (offline index policy with the true model; uniform random B-subset).
enum class RunAlgorithm : std::uint8_t { FairUcrl, GFairUcrl, OracleIndex, Random };

/// Cumulative reward regret Delta_t = t * v_star - total collected reward.
std::vector<double> reward_regret(const TrialLog& log, double v_star);

/// Per-arm cumulative fairness violation Delta_t = t * eta_n - activations.
/// Signed: negative means over-service. Shape [arm][epoch].
std::vector<std::vector<double>> fairness_violation(const TrialLog& log,
                                                    const std::vector<double>& eta);

struct BenchmarkOptions {
    int horizon = 2000;
    int trials = 20;
    std::uint64_t seed = 12345;
    int jobs = 1;
};

/// Both regret benchmarks: the offline LP upper bound and the simulated
/// long-run average of the offline FairRMAB index policy, per step.
struct OfflineBenchmark {
    double lp_bound = 0.0;
    double index_value = 0.0;
    double index_stderr = 0.0;
    OccupancyMeasure occupancy;  // offline LP solution
    IndexTable indices;          // fair indices of that solution
};

OfflineBenchmark offline_benchmark(const RmabInstance& instance,
                                   const BenchmarkOptions& options = {});

/// Grid enumeration over stationary per-state activation probabilities for a
/// single-arm instance (N=1, S<=3); independent cross-check of the LP path.
double brute_force_value(const RmabInstance& instance, double grid = 0.01);

struct MonteCarloOptions {
    int trials = 100;
    int jobs = 1;
};

/// Per-epoch means over trials. Arm-resolved series are kept for the first
/// min(8, N) arms; min/mean columns cover all arms.
struct AggregateMetrics {
    int trials = 0;
    int horizon = 0;
    int num_arms = 0;
    int tracked_arms = 0;
    double lp_bound = 0.0;        // per-step benchmarks used for the regrets
    double index_benchmark = 0.0;
    std::vector<double> mean_cum_reward;
    std::vector<double> mean_regret_lp;
    std::vector<double> mean_regret_index;
    std::vector<double> stderr_regret;              // standard error of the regret
    std::vector<std::vector<double>> act_frac;      // [tracked arm][epoch]
    std::vector<std::vector<double>> fair_viol;     // [tracked arm][epoch]
    std::vector<double> act_frac_min;               // min over all arms, per epoch
    std::vector<double> act_frac_mean;              // mean over all arms, per epoch
    std::vector<double> second_half_act_frac;       // per arm, mean over [T/2, T)
    long min_quota_margin = 0;  // min over trials/episodes/arms of
                                // (episode activations - ceil(H*eta)); learners only
};

AggregateMetrics run_monte_carlo(const RmabInstance& instance,
                                 const LearnerConfig& config, RunAlgorithm algorithm,
                                 const OfflineBenchmark& benchmark,
                                 const MonteCarloOptions& options);

struct SweepOptions {
    std::vector<int> replicas = {1, 10};
    int horizon = 3600;
    int trials = 50;
    std::uint64_t seed = 7;
    int jobs = 1;
};

struct SweepPoint {
    int replicas = 0;
    int arms = 0;
    double lp_bound = 0.0;            // total, for the replicated instance
    double sim_mean = 0.0;            // simulated per-step total reward
    double sim_stderr = 0.0;
    double gap_per_arm = 0.0;         // (lp_bound - sim_mean) / arms
    double attractor_residual = 0.0;  // mean L1 gap between empirical and LP occupancy
};

/// Replicates each arm of `base` rho times (budget rho * B), simulates the
/// offline index policy, and reports the per-arm optimality gap per replica
/// count. The LP bound of the replicated instance is rho times the base LP
/// value by replica symmetry.
std::vector<SweepPoint> optimality_gap_sweep(const RmabInstance& base,
                                             const SweepOptions& options);

}  // namespace rmabf
