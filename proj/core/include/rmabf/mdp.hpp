// Domain types for restless arms and problem instances, plus small exact
// utilities (stationary distributions) shared by the planners and tests.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmabf {

inline constexpr int kNumActions = 2;  // 0 = passive, 1 = active

/// Thrown on hard contract violations (bad parameters, solver breakdown).
class RmabError : public std::runtime_error {
public:
    explicit RmabError(const std::string& what) : std::runtime_error(what) {}
};

enum class RewardDist : std::uint8_t { Bernoulli, Deterministic };

/// One arm's two-action MDP. States are 0..num_states-1; action 1 is
/// "activate". Passive rewards are identically zero.
struct ArmModel {
    int num_states = 0;
    // transition[a][s][s'] — row-stochastic in s'.
    std::vector<std::vector<std::vector<double>>> transition;
    // reward_mean[s][a], all in [0,1]; column a=0 must be zero.
    std::vector<std::vector<double>> reward_mean;
    RewardDist reward_dist = RewardDist::Bernoulli;

    const std::vector<double>& row(int action, int state) const {
        return transition[action][state];
    }
};

/// N arms, an activation budget, and per-arm fairness floors.
struct RmabInstance {
    std::vector<ArmModel> arms;
    int budget = 0;
    std::vector<double> eta;
    std::vector<int> initial_states;

    int num_arms() const { return static_cast<int>(arms.size()); }
    int num_states() const { return arms.empty() ? 0 : arms.front().num_states; }
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::pair<std::string, std::string>> violations;  // (code, message)

    void add(std::string code, std::string message) {
        ok = false;
        violations.emplace_back(std::move(code), std::move(message));
    }
};

/// Checks every structural invariant of the instance: row-stochastic kernels,
/// zero passive rewards, reward means in [0,1], B <= N, sum(eta) <= B, shared
/// state space, initial states in range. Never throws; problems land in the
/// report.
ValidationReport validate_instance(const RmabInstance& instance);

/// Stationary distribution of a row-stochastic kernel via a direct linear
/// solve of pi P = pi, sum(pi) = 1. Throws RmabError for reducible chains
/// (singular system or a fixed point that is not a probability vector).
std::vector<double> stationary_distribution(
    const std::vector<std::vector<double>>& kernel);

}  // namespace rmabf
