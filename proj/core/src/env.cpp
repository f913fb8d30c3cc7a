#include "rmabf/env.hpp"

#include <array>
#include <cmath>

namespace rmabf {

namespace {

ArmModel blank_arm(int S, RewardDist dist) {
    ArmModel arm;
    arm.num_states = S;
    arm.reward_dist = dist;
    arm.transition.assign(kNumActions,
                          std::vector<std::vector<double>>(S, std::vector<double>(S, 0.0)));
    arm.reward_mean.assign(S, std::vector<double>(kNumActions, 0.0));
    return arm;
}

// Passive kernels from the CPAP cluster transition diagrams, states
// 0/1/2 = low/intermediate/acceptable adherence. The cluster-2 row for the
// low state is published with a 1.0003 total; the excess is taken out of the
// low->acceptable entry so the row is stochastic while every other entry
// stays at its published value.
constexpr std::array<std::array<double, 3>, 3> kCpapCluster1 = {{
    {0.0385, 0.0, 0.9615},
    {0.0, 0.0, 1.0},
    {0.0257, 0.0245, 0.9498},
}};
constexpr std::array<std::array<double, 3>, 3> kCpapCluster2 = {{
    {0.7427, 0.0741, 0.1832},
    {0.3399, 0.1634, 0.4967},
    {0.2323, 0.1020, 0.6657},
}};

}  // namespace

ArmModel make_birth_death_arm(double lambda, double mu, int num_states,
                              double reward_slope) {
    if (lambda <= 0.0 || mu <= 0.0) {
        throw RmabError("make_birth_death_arm: rates must be positive");
    }
    if (num_states < 2) {
        throw RmabError("make_birth_death_arm: need at least 2 states");
    }
    if (reward_slope <= 0.0 || reward_slope * (num_states - 1) > 1.0 + 1e-12) {
        throw RmabError("make_birth_death_arm: reward mean exceeds 1");
    }

    const double up = lambda / (lambda + mu);
    const double down = mu / (lambda + mu);
    ArmModel arm = blank_arm(num_states, RewardDist::Bernoulli);
    for (int a = 0; a < kNumActions; ++a) {
        for (int s = 0; s < num_states; ++s) {
            auto& row = arm.transition[a][s];
            if (s + 1 < num_states) row[s + 1] += up; else row[s] += up;
            if (s - 1 >= 0) row[s - 1] += down; else row[s] += down;
        }
    }
    for (int s = 0; s < num_states; ++s) arm.reward_mean[s][1] = s * reward_slope;
    return arm;
}

ArmModel make_cpap_arm(int cluster, double boost, double noise_scale, Rng& rng) {
    if (cluster != 1 && cluster != 2) {
        throw RmabError("make_cpap_arm: cluster must be 1 or 2");
    }
    if (boost != 0.0 && (boost < 0.05 || boost > 0.50)) {
        throw RmabError("make_cpap_arm: boost must be in [0.05, 0.50]");
    }
    if (noise_scale < 0.0) {
        throw RmabError("make_cpap_arm: noise_scale must be nonnegative");
    }

    const auto& base = (cluster == 1) ? kCpapCluster1 : kCpapCluster2;
    const int S = 3;
    ArmModel arm = blank_arm(S, RewardDist::Deterministic);

    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    for (int s = 0; s < S; ++s) {
        auto& row = arm.transition[0][s];
        double sum = 0.0;
        for (int t = 0; t < S; ++t) {
            double p = base[s][t];
            if (noise_scale > 0.0) p += noise_scale * noise(rng);
            row[t] = std::max(p, 0.0);
            sum += row[t];
        }
        if (sum < 1e-9) throw RmabError("make_cpap_arm: noisy row not normalizable");
        for (int t = 0; t < S; ++t) row[t] /= sum;
    }

    // Active intervention shifts fraction `boost` of the non-top mass to the
    // top adherence state.
    for (int s = 0; s < S; ++s) {
        const auto& passive = arm.transition[0][s];
        auto& active = arm.transition[1][s];
        double moved = 0.0;
        for (int t = 0; t < S - 1; ++t) {
            active[t] = passive[t] * (1.0 - boost);
            moved += passive[t] * boost;
        }
        active[S - 1] = passive[S - 1] + moved;
    }

    for (int s = 0; s < S; ++s) {
        arm.reward_mean[s][1] = static_cast<double>(s) / (S - 1);
    }
    return arm;
}

ArmModel make_rte_arm(double success_prob) {
    if (success_prob < 0.0 || success_prob > 1.0) {
        throw RmabError("make_rte_arm: success probability outside [0,1]");
    }
    ArmModel arm = blank_arm(2, RewardDist::Deterministic);
    for (int s = 0; s < 2; ++s) {
        arm.transition[1][s][1] = success_prob;
        arm.transition[1][s][0] = 1.0 - success_prob;
        arm.transition[0][s][0] = 1.0;  // an unassigned worker's answer goes stale
    }
    arm.reward_mean[1][1] = 1.0;
    return arm;
}

ArmModel make_lmss_arm(int elevation_deg, double good_reward, double bad_reward) {
    // Two-state channel kernels per elevation angle: p11 p12 / p21 p22 with
    // state 0 = Good, state 1 = Bad.
    double p11 = 0.0, p21 = 0.0;
    switch (elevation_deg) {
        case 40: p11 = 0.9155; p21 = 0.0811; break;
        case 60: p11 = 0.9043; p21 = 0.2; break;
        case 70: p11 = 0.9155; p21 = 0.2069; break;
        case 80: p11 = 0.9268; p21 = 0.2667; break;
        default:
            throw RmabError("make_lmss_arm: unknown elevation angle " +
                            std::to_string(elevation_deg));
    }
    if (good_reward < 0.0 || good_reward > 1.0 || bad_reward < 0.0 || bad_reward > 1.0) {
        throw RmabError("make_lmss_arm: rewards must lie in [0,1]");
    }
    ArmModel arm = blank_arm(2, RewardDist::Deterministic);
    for (int a = 0; a < kNumActions; ++a) {
        arm.transition[a][0] = {p11, 1.0 - p11};
        arm.transition[a][1] = {p21, 1.0 - p21};
    }
    arm.reward_mean[0][1] = good_reward;
    arm.reward_mean[1][1] = bad_reward;
    return arm;
}

ArmModel make_arm(const EnvSpec& spec) {
    return std::visit(
        [](const auto& s) -> ArmModel {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BirthDeathSpec>) {
                return make_birth_death_arm(s.lambda, s.mu, s.num_states, s.reward_slope);
            } else if constexpr (std::is_same_v<T, CpapSpec>) {
                Rng rng(s.seed);
                return make_cpap_arm(s.cluster, s.boost, s.noise_scale, rng);
            } else if constexpr (std::is_same_v<T, RteSpec>) {
                return make_rte_arm(s.success_prob);
            } else {
                return make_lmss_arm(s.elevation_deg, s.good_reward, s.bad_reward);
            }
        },
        spec);
}

int sample_row(const std::vector<double>& row, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    double acc = 0.0;
    for (int t = 0; t < static_cast<int>(row.size()); ++t) {
        acc += row[t];
        if (u < acc) return t;
    }
    return static_cast<int>(row.size()) - 1;
}

StepOutcome step_arm(const ArmModel& arm, int state, int action, Rng& rng) {
    StepOutcome out;
    out.next_state = sample_row(arm.transition[action][state], rng);
    if (action == 0) return out;

    const double mean = arm.reward_mean[state][1];
    if (arm.reward_dist == RewardDist::Deterministic) {
        out.reward = mean;
    } else {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        out.reward = (unif(rng) < mean) ? 1.0 : 0.0;
    }
    return out;
}

}  // namespace rmabf
