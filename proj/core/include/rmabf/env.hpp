// Builders for the four benchmark environments and stochastic arm stepping.

#pragma once

#include <cstdint>
#include <random>
#include <variant>

#include "rmabf/mdp.hpp"

namespace rmabf {

using Rng = std::mt19937_64;

struct BirthDeathSpec {
    double lambda = 1.0;   // arrival rate
    double mu = 1.0;       // departure rate
    int num_states = 2;
    double reward_slope = 0.1;  // mean active reward at state s is s * slope
};

struct CpapSpec {
    int cluster = 1;            // 1 = adherence group, 2 = non-adherence group
    double boost = 0.05;        // active uplift toward the top adherence state
    double noise_scale = 0.0;   // magnitude of zero-mean per-entry noise
    std::uint64_t seed = 0;
};

struct RteSpec {
    double success_prob = 0.5;
};

struct LmssSpec {
    int elevation_deg = 40;     // one of 40, 60, 70, 80
    double good_reward = 1.0;   // defaults are placeholders, not from the source data
    double bad_reward = 0.2;
};

using EnvSpec = std::variant<BirthDeathSpec, CpapSpec, RteSpec, LmssSpec>;

struct StepOutcome {
    int next_state = 0;
    double reward = 0.0;
};

/// Birth-death chain on 0..S-1: up with probability lambda/(lambda+mu), down
/// with mu/(lambda+mu); out-of-range mass self-loops. Both action kernels are
/// identical; activation only harvests the Bernoulli reward with mean s*slope.
ArmModel make_birth_death_arm(double lambda, double mu, int num_states,
                              double reward_slope);

/// Three-state adherence model. Passive kernel comes from the cluster's
/// transition diagram plus optional zero-mean noise (renormalized); the active
/// kernel moves fraction `boost` of each row's non-top mass to the top state.
ArmModel make_cpap_arm(int cluster, double boost, double noise_scale, Rng& rng);

/// Two-state annotation model: activating reaches state 1 with probability q
/// from either state; an unassigned worker decays to state 0.
ArmModel make_rte_arm(double success_prob);

/// Two-state satellite channel; the tabulated kernel applies under both
/// actions (the channel evolves regardless of selection).
ArmModel make_lmss_arm(int elevation_deg, double good_reward = 1.0,
                       double bad_reward = 0.2);

ArmModel make_arm(const EnvSpec& spec);

/// Samples one transition and reward. Passive steps always yield reward 0.
StepOutcome step_arm(const ArmModel& arm, int state, int action, Rng& rng);

/// Inverse-CDF draw from a probability row; exposed for tests.
int sample_row(const std::vector<double>& row, Rng& rng);

}  // namespace rmabf
