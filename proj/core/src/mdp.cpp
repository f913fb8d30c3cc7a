#include "rmabf/mdp.hpp"

#include <cmath>
#include <numeric>

namespace rmabf {

namespace {
constexpr double kRowSumTol = 1e-9;
}

ValidationReport validate_instance(const RmabInstance& instance) {
    ValidationReport report;
    const int n_arms = instance.num_arms();

    if (n_arms == 0) {
        report.add("empty-instance", "instance has no arms");
        return report;
    }
    if (instance.budget < 1) {
        report.add("bad-budget", "budget must be a positive integer");
    }
    if (instance.budget > n_arms) {
        report.add("budget-exceeds-arms",
                   "budget " + std::to_string(instance.budget) + " exceeds arm count " +
                       std::to_string(n_arms));
    }
    if (static_cast<int>(instance.eta.size()) != n_arms) {
        report.add("eta-length", "eta list length does not match arm count");
    }
    if (static_cast<int>(instance.initial_states.size()) != n_arms) {
        report.add("initial-states-length",
                   "initial_states length does not match arm count");
    }

    const int S = instance.arms.front().num_states;
    for (int n = 0; n < n_arms; ++n) {
        const ArmModel& arm = instance.arms[n];
        const std::string tag = "arm " + std::to_string(n);
        if (arm.num_states != S) {
            report.add("state-space-mismatch", tag + ": arms must share one state space");
            continue;
        }
        if (arm.num_states < 1 ||
            static_cast<int>(arm.transition.size()) != kNumActions ||
            static_cast<int>(arm.reward_mean.size()) != arm.num_states) {
            report.add("malformed-arm", tag + ": inconsistent dimensions");
            continue;
        }
        for (int a = 0; a < kNumActions; ++a) {
            if (static_cast<int>(arm.transition[a].size()) != arm.num_states) {
                report.add("malformed-arm", tag + ": kernel row count mismatch");
                continue;
            }
            for (int s = 0; s < arm.num_states; ++s) {
                const auto& row = arm.transition[a][s];
                if (static_cast<int>(row.size()) != arm.num_states) {
                    report.add("malformed-arm", tag + ": kernel column count mismatch");
                    continue;
                }
                double sum = 0.0;
                bool negative = false;
                for (double p : row) {
                    if (p < -kRowSumTol || p > 1.0 + kRowSumTol) negative = true;
                    sum += p;
                }
                if (negative) {
                    report.add("probability-range",
                               tag + ": kernel entry outside [0,1] at (a=" +
                                   std::to_string(a) + ", s=" + std::to_string(s) + ")");
                }
                if (std::abs(sum - 1.0) > kRowSumTol) {
                    report.add("non-stochastic-row",
                               tag + ": kernel row (a=" + std::to_string(a) +
                                   ", s=" + std::to_string(s) + ") sums to " +
                                   std::to_string(sum));
                }
            }
        }
        for (int s = 0; s < arm.num_states; ++s) {
            if (static_cast<int>(arm.reward_mean[s].size()) != kNumActions) {
                report.add("malformed-arm", tag + ": reward matrix shape");
                continue;
            }
            if (arm.reward_mean[s][0] != 0.0) {
                report.add("passive-reward",
                           tag + ": passive reward must be 0 at s=" + std::to_string(s));
            }
            for (int a = 0; a < kNumActions; ++a) {
                const double r = arm.reward_mean[s][a];
                if (r < 0.0 || r > 1.0) {
                    report.add("reward-range",
                               tag + ": reward mean outside [0,1] at (s=" +
                                   std::to_string(s) + ", a=" + std::to_string(a) + ")");
                }
            }
        }
    }

    if (static_cast<int>(instance.eta.size()) == n_arms) {
        double eta_sum = 0.0;
        for (int n = 0; n < n_arms; ++n) {
            const double eta = instance.eta[n];
            if (eta < 0.0 || eta >= 1.0) {
                report.add("eta-range",
                           "arm " + std::to_string(n) + ": eta must lie in [0,1)");
            }
            eta_sum += eta;
        }
        if (eta_sum > instance.budget + kRowSumTol) {
            report.add("fairness-exceeds-budget",
                       "fairness floors exceed budget: sum(eta)=" + std::to_string(eta_sum) +
                           " > B=" + std::to_string(instance.budget));
        }
    }

    if (static_cast<int>(instance.initial_states.size()) == n_arms) {
        for (int n = 0; n < n_arms; ++n) {
            if (instance.initial_states[n] < 0 || instance.initial_states[n] >= S) {
                report.add("initial-state-range",
                           "arm " + std::to_string(n) + ": initial state out of range");
            }
        }
    }

    return report;
}

std::vector<double> stationary_distribution(
    const std::vector<std::vector<double>>& kernel) {
    const int S = static_cast<int>(kernel.size());
    if (S == 0) throw RmabError("stationary_distribution: empty kernel");

    // Solve (P^T - I) pi = 0 with the last row replaced by sum(pi) = 1.
    std::vector<std::vector<double>> m(S, std::vector<double>(S + 1, 0.0));
    for (int i = 0; i < S; ++i) {
        for (int j = 0; j < S; ++j) {
            m[i][j] = kernel[j][i] - (i == j ? 1.0 : 0.0);
        }
    }
    for (int j = 0; j < S; ++j) m[S - 1][j] = 1.0;
    m[S - 1][S] = 1.0;

    for (int col = 0; col < S; ++col) {
        int pivot = col;
        for (int r = col + 1; r < S; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        }
        if (std::abs(m[pivot][col]) < 1e-12) {
            throw RmabError(
                "stationary_distribution: periodic or reducible chain suspected");
        }
        std::swap(m[col], m[pivot]);
        for (int r = 0; r < S; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            if (f == 0.0) continue;
            for (int j = col; j <= S; ++j) m[r][j] -= f * m[col][j];
        }
    }

    std::vector<double> pi(S);
    for (int i = 0; i < S; ++i) pi[i] = m[i][S] / m[i][i];

    double residual = 0.0;
    for (int j = 0; j < S; ++j) {
        double dot = 0.0;
        for (int i = 0; i < S; ++i) dot += pi[i] * kernel[i][j];
        residual = std::max(residual, std::abs(dot - pi[j]));
    }
    double min_entry = 0.0;
    for (double p : pi) min_entry = std::min(min_entry, p);
    if (residual > 1e-8 || min_entry < -1e-9) {
        throw RmabError(
            "stationary_distribution: periodic or reducible chain suspected");
    }
    for (double& p : pi) p = std::max(p, 0.0);
    return pi;
}

}  // namespace rmabf
