// Occupancy-measure linear programs: the offline relaxation over per-arm
// state-action frequencies and the per-episode extended LP over
// state-action-next-state frequencies with confidence-ball rows.

#pragma once

#include <optional>
#include <vector>

#include "rmabf/mdp.hpp"
#include "rmabf/simplex.hpp"

namespace rmabf {

enum class Sense : std::uint8_t { Maximize, Minimize };

/// Dimensions of an occupancy LP; `extended` selects z(s,a,s') variables.
struct LpDims {
    int num_arms = 0;
    int num_states = 0;
    bool extended = false;

    int vars_per_arm() const {
        return num_states * kNumActions * (extended ? num_states : 1);
    }
    int num_vars() const { return num_arms * vars_per_arm(); }
    int zeta_index(int n, int s, int a) const {
        return (n * num_states + s) * kNumActions + a;
    }
    int z_index(int n, int s, int a, int s_next) const {
        return ((n * num_states + s) * kNumActions + a) * num_states + s_next;
    }
};

struct StandardFormLP {
    Sense sense = Sense::Maximize;
    std::vector<double> objective;
    std::vector<SparseRow> ineq;  // a.x <= b
    std::vector<SparseRow> eq;    // a.x  = b
    LpDims dims;                  // index map back to (n,s,a[,s'])
};

struct LpSolution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<double> x;
    double objective_value = 0.0;
};

/// Per-(arm,state,action) empirical kernel, mean reward, and radius; defines
/// the plausible-MDP ball. Optimistic reward is r_hat + delta, unclipped.
struct ConfidenceModel {
    int num_arms = 0;
    int num_states = 0;
    std::vector<double> p_hat;  // [n][s][a][s']
    std::vector<double> r_hat;  // [n][s][a]
    std::vector<double> delta;  // [n][s][a]

    int sa_index(int n, int s, int a) const {
        return (n * num_states + s) * kNumActions + a;
    }
    double p(int n, int s, int a, int s_next) const {
        return p_hat[sa_index(n, s, a) * num_states + s_next];
    }
    double r_tilde(int n, int s, int a) const {
        return r_hat[sa_index(n, s, a)] + delta[sa_index(n, s, a)];
    }
};

/// Builds a ConfidenceModel with zero radii from the true kernels and mean
/// rewards; collapses the extended LP onto the offline one.
ConfidenceModel exact_confidence_model(const RmabInstance& instance);

/// Per-arm visitation frequencies. Always carries the state-action marginal;
/// z is present only for solutions of the extended LP.
struct OccupancyMeasure {
    int num_arms = 0;
    int num_states = 0;
    std::vector<std::vector<double>> zeta;           // per arm, [s][a] flattened
    std::vector<std::vector<double>> z;              // per arm, [s][a][s'] flattened; may be empty

    double zeta_at(int n, int s, int a) const {
        return zeta[n][s * kNumActions + a];
    }
    double z_at(int n, int s, int a, int s_next) const {
        return z[n][(s * kNumActions + a) * num_states + s_next];
    }
    bool has_z() const { return !z.empty(); }
    /// Long-run activation fraction of arm n.
    double activation(int n) const;
};

/// Offline relaxation: maximize expected reward over per-arm occupancies with
/// one budget row, per-arm fairness floors, flow balance under the true
/// kernels, and per-arm normalization.
StandardFormLP build_offline_lp(const RmabInstance& instance);

/// Extended LP over z(s,a,s'): optimistic objective with r_hat + delta, the
/// budget row, fairness rows iff requested, flow balance, normalization, and
/// linearized confidence-ball rows with (p_hat +- delta) clamped to [0,1].
StandardFormLP build_elp(const ConfidenceModel& conf, int budget,
                         const std::vector<double>& eta, bool include_fairness);

/// Exact vertex solve via two-phase dense simplex. Infeasible/Unbounded come
/// back as statuses; only iteration-cap breakdowns throw.
LpSolution solve_lp(const StandardFormLP& lp);

/// Reshapes an Optimal solution through the LP's index map, clips negative
/// round-off in [-1e-9, 0), and re-checks normalization and flow balance.
OccupancyMeasure occupancy_from_solution(const LpSolution& sol, const LpDims& dims);

}  // namespace rmabf
