// Online learning: visit-count maintenance, empirical estimates, confidence
// radii, per-episode optimistic planning, and the Fair-UCRL / G-Fair-UCRL
// episode loops.

#pragma once

#include <cstdint>
#include <vector>

#include "rmabf/env.hpp"
#include "rmabf/index_policy.hpp"
#include "rmabf/planner.hpp"

namespace rmabf {

/// Per-arm visitation statistics C_n(s,a), C_n(s,a,s'), and reward sums.
struct Counts {
    int num_arms = 0;
    int num_states = 0;
    std::vector<std::vector<long>> visit;        // per arm, [s][a] flattened
    std::vector<std::vector<long>> trans;        // per arm, [s][a][s'] flattened
    std::vector<std::vector<double>> reward_sum; // per arm, [s][a] flattened

    int sa(int s, int a) const { return s * kNumActions + a; }
    int sas(int s, int a, int s_next) const {
        return (s * kNumActions + a) * num_states + s_next;
    }
};

enum class Algorithm : std::uint8_t { FairUcrl, GFairUcrl };

struct LearnerConfig {
    int episodes = 1;          // K
    int horizon = 1;           // H, epochs per episode
    double epsilon = 0.1;      // confidence level in (0,1)
    std::uint64_t seed = 0;
    Algorithm algorithm = Algorithm::FairUcrl;
    PlanMethod plan_method = PlanMethod::Auto;
};

/// Full trajectory of one trial plus the per-episode plans. Indexing is
/// epoch-major: entry t * num_arms + n.
struct TrialLog {
    int num_arms = 0;
    int horizon = 0;              // T = K * H
    int episodes = 0;
    int epochs_per_episode = 0;
    std::vector<std::uint8_t> states;    // state at the start of each epoch
    std::vector<std::uint8_t> actions;
    std::vector<double> rewards;
    std::vector<double> episode_objectives;   // planned ELP value, one per episode
    std::vector<IndexTable> episode_indices;  // one per episode
    std::vector<long> episode_activations;    // k * num_arms + n
    std::vector<long> activation_counts;      // per arm, whole trial

    int at(int t, int n) const { return t * num_arms + n; }
};

Counts init_counts(int num_arms, int num_states);

void update_counts(Counts& counts, int n, int s, int a, double reward, int s_next);

/// P_hat = trans / max(visit, 1) with uniform 1/S fallback on unvisited rows;
/// r_hat = reward_sum / max(visit, 1). Radii are left at zero.
ConfidenceModel empirical_estimates(const Counts& counts);

/// Theorem-style radius sqrt(log(S*A*N*max(k-1,1)*H/epsilon) / (2*max(count,1))).
double confidence_radius(long count, int k, int horizon, double epsilon,
                         int num_states, int num_actions, int num_arms);

struct EpisodePlan {
    IndexTable indices;
    double objective = 0.0;
    OccupancyMeasure occupancy;
};

/// Builds the confidence model for episode k and solves the extended LP
/// (fairness rows included iff `include_fairness`).
EpisodePlan plan_episode(const Counts& counts, int k, const LearnerConfig& config,
                         int budget, const std::vector<double>& eta,
                         bool include_fairness);

/// Per-episode activation quota ceil(H * eta), with a tiny backoff so that
/// floating-point products like 160 * 0.3 do not round the ceiling up.
long fairness_quota(double eta, int horizon);

/// Forced-exploration prefix: ceil(sum_n ceil(H*eta_n) / B) epochs in which arm
/// n is activated at least ceil(H*eta_n) times; every epoch activates exactly
/// min(B, N) arms, slack slots filled round-robin. Throws RmabError
/// "fairness quota exceeds episode budget" when the quotas cannot fit.
std::vector<ActionVector> greedy_exploration_schedule(const std::vector<double>& eta,
                                                      int horizon, int budget,
                                                      int num_arms, Rng& rng);

TrialLog run_fair_ucrl(const RmabInstance& instance, const LearnerConfig& config);

TrialLog run_g_fair_ucrl(const RmabInstance& instance, const LearnerConfig& config);

}  // namespace rmabf
