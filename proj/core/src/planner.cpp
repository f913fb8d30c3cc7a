#include "rmabf/planner.hpp"

#include <algorithm>
#include <cmath>

#include "rmabf/simplex.hpp"

namespace rmabf {

namespace {

constexpr double kBudgetTol = 1e-9;
constexpr int kDirectVarLimit = 300;  // above this, decompose per arm

PlanResult plan_direct(const ConfidenceModel& conf, int budget,
                       const std::vector<double>& eta, bool include_fairness) {
    const StandardFormLP lp = build_elp(conf, budget, eta, include_fairness);
    const LpSolution sol = solve_lp(lp);
    if (sol.status == SolveStatus::Infeasible) throw RmabError("infeasible plan");
    if (sol.status != SolveStatus::Optimal) {
        throw RmabError("planner: extended LP did not reach an optimum");
    }
    PlanResult result;
    result.occupancy = occupancy_from_solution(sol, lp.dims);
    result.objective = sol.objective_value;
    return result;
}

// One arm's slice of the extended LP, with the budget row left out. The
// Lagrangian objective is r_tilde(s,a) - lambda * [a == 1] per unit of z.
struct ArmSubproblem {
    int num_states = 0;
    std::vector<double> base_cost;    // minimization: -r_tilde per variable
    std::vector<double> active_mask;  // 1.0 on z(s,1,*) variables
    SimplexTableau tableau;
    SimplexTableau clean;  // post-build optimal state; drift-recovery restore point
    std::vector<SparseRow> rows;  // kept for the rebuild-from-scratch fallback

    int vars() const { return num_states * kNumActions * num_states; }
    int z_index(int s, int a, int t) const {
        return (s * kNumActions + a) * num_states + t;
    }

    void build(const ConfidenceModel& conf, int n, double eta_n,
               bool include_fairness) {
        num_states = conf.num_states;
        const int S = num_states;
        base_cost.assign(vars(), 0.0);
        active_mask.assign(vars(), 0.0);
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < kNumActions; ++a) {
                const double r = conf.r_tilde(n, s, a);
                for (int t = 0; t < S; ++t) {
                    base_cost[z_index(s, a, t)] = -r;
                    if (a == 1) active_mask[z_index(s, a, t)] = 1.0;
                }
            }
        }

        rows.clear();
        if (include_fairness) {
            SparseRow fair;
            fair.relation = Relation::GreaterEqual;
            fair.rhs = eta_n;
            for (int s = 0; s < S; ++s) {
                for (int t = 0; t < S; ++t) {
                    fair.coeffs.emplace_back(z_index(s, 1, t), 1.0);
                }
            }
            rows.push_back(std::move(fair));
        }

        // Flow rows sum to zero across states, so the last one is redundant;
        // dropping it keeps phase 1 free of residual zero-level artificials.
        for (int s = 0; s < S - 1; ++s) {
            SparseRow flow;
            flow.relation = Relation::Equal;
            flow.rhs = 0.0;
            std::vector<double> coeff(vars(), 0.0);
            for (int a = 0; a < kNumActions; ++a) {
                for (int t = 0; t < S; ++t) coeff[z_index(s, a, t)] += 1.0;
                for (int sp = 0; sp < S; ++sp) coeff[z_index(sp, a, s)] -= 1.0;
            }
            for (int j = 0; j < vars(); ++j) {
                if (coeff[j] != 0.0) flow.coeffs.emplace_back(j, coeff[j]);
            }
            rows.push_back(std::move(flow));
        }

        SparseRow norm;
        norm.relation = Relation::Equal;
        norm.rhs = 1.0;
        for (int j = 0; j < vars(); ++j) norm.coeffs.emplace_back(j, 1.0);
        rows.push_back(std::move(norm));

        // Ball rows, skipping vacuous bounds (hi == 1 or lo == 0); dropping
        // them changes nothing since 0 <= z(s,a,t) <= sum_y z(s,a,y) always.
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < kNumActions; ++a) {
                const int sa = conf.sa_index(n, s, a);
                const double d = conf.delta[sa];
                for (int t = 0; t < S; ++t) {
                    const double hi = std::min(1.0, conf.p(n, s, a, t) + d);
                    const double lo = std::max(0.0, conf.p(n, s, a, t) - d);
                    if (hi < 1.0) {
                        SparseRow upper;
                        upper.relation = Relation::LessEqual;
                        upper.rhs = 0.0;
                        for (int y = 0; y < S; ++y) {
                            const double c = -hi + (y == t ? 1.0 : 0.0);
                            if (c != 0.0) upper.coeffs.emplace_back(z_index(s, a, y), c);
                        }
                        rows.push_back(std::move(upper));
                    }
                    if (lo > 0.0) {
                        SparseRow lower;
                        lower.relation = Relation::LessEqual;
                        lower.rhs = 0.0;
                        for (int y = 0; y < S; ++y) {
                            const double c = lo - (y == t ? 1.0 : 0.0);
                            if (c != 0.0) lower.coeffs.emplace_back(z_index(s, a, y), c);
                        }
                        rows.push_back(std::move(lower));
                    }
                }
            }
        }

        tableau.load(vars(), cost_at(0.0), rows);
        if (tableau.solve() != SolveStatus::Optimal) throw RmabError("infeasible plan");
        clean = tableau;
    }

    std::vector<double> cost_at(double lambda) const {
        std::vector<double> c = base_cost;
        for (int j = 0; j < vars(); ++j) c[j] += lambda * active_mask[j];
        return c;
    }

    /// True when the current solution is a plausible occupancy: unit mass and
    /// no negative entries beyond round-off.
    bool solution_ok(double mass_tol) const {
        double total = 0.0, lowest = 0.0;
        for (double v : tableau.solution()) {
            total += v;
            lowest = std::min(lowest, v);
        }
        return std::abs(total - 1.0) <= mass_tol && lowest >= -1e-9;
    }

    /// Re-optimizes at the given budget price; returns this arm's activation.
    /// Warm-restarts from the current basis. If round-off shows up in the
    /// solution, retries from the clean post-build state, and as a last
    /// resort reloads the subproblem and solves it from scratch.
    double resolve(double lambda) {
        const std::vector<double> cost = cost_at(lambda);
        SolveStatus status = tableau.resolve_with_objective(cost);
        if (status == SolveStatus::Optimal && solution_ok(1e-9)) {
            return activation();
        }
        tableau = clean;
        status = tableau.resolve_with_objective(cost);
        if (status == SolveStatus::Optimal && solution_ok(1e-9)) {
            return activation();
        }
        tableau.load(vars(), cost, rows);
        status = tableau.solve();
        if (status != SolveStatus::Optimal || !solution_ok(1e-7)) {
            throw RmabError("planner: per-arm subproblem lost feasibility");
        }
        return activation();
    }

    double activation() const {
        double act = 0.0;
        const std::vector<double>& x = tableau.solution();
        for (int j = 0; j < vars(); ++j) act += active_mask[j] * x[j];
        return act;
    }
};

PlanResult plan_decomposed(const ConfidenceModel& conf, int budget,
                           const std::vector<double>& eta, bool include_fairness) {
    const int N = conf.num_arms;
    const int S = conf.num_states;

    std::vector<ArmSubproblem> arms(N);
    std::vector<std::vector<double>> sol_lo(N), sol_hi(N);
    double act_lo = 0.0;
    for (int n = 0; n < N; ++n) {
        arms[n].build(conf, n, eta.empty() ? 0.0 : eta[n], include_fairness);
        sol_lo[n] = arms[n].tableau.solution();
        double a = 0.0;
        for (int j = 0; j < arms[n].vars(); ++j) {
            a += arms[n].active_mask[j] * sol_lo[n][j];
        }
        act_lo += a;
    }

    auto evaluate = [&](double lambda, std::vector<std::vector<double>>& out) {
        double total = 0.0;
        out.resize(N);
        for (int n = 0; n < N; ++n) {
            total += arms[n].resolve(lambda);
            out[n] = arms[n].tableau.solution();
        }
        return total;
    };

    double alpha = 1.0;  // weight on the lambda_lo (high-activation) solutions
    if (act_lo > budget + kBudgetTol) {
        // Activation is non-increasing in lambda; above the largest optimistic
        // reward only fairness floors keep arms active, and those fit in B.
        double lambda_lo = 0.0, lambda_hi = 1.0;
        double act_hi = evaluate(lambda_hi, sol_hi);
        int guard = 0;
        while (act_hi > budget + kBudgetTol) {
            lambda_lo = lambda_hi;
            sol_lo = sol_hi;
            act_lo = act_hi;
            lambda_hi *= 2.0;
            act_hi = evaluate(lambda_hi, sol_hi);
            if (++guard > 64) throw RmabError("planner: budget price search diverged");
        }
        for (int it = 0; it < 100; ++it) {
            // The mixed endpoint solution is optimal up to (price gap) x
            // (activation gap); stop once that bound is negligible.
            if (act_lo - act_hi <= 1e-9) break;
            if ((lambda_hi - lambda_lo) * (act_lo - act_hi) <= 1e-8) break;
            const double mid = 0.5 * (lambda_lo + lambda_hi);
            std::vector<std::vector<double>> sol_mid;
            const double act_mid = evaluate(mid, sol_mid);
            if (act_mid > budget + kBudgetTol) {
                lambda_lo = mid;
                sol_lo = std::move(sol_mid);
                act_lo = act_mid;
            } else {
                lambda_hi = mid;
                sol_hi = std::move(sol_mid);
                act_hi = act_mid;
            }
        }
        // Mix the two endpoint solutions so the budget row binds exactly; both
        // are feasible for every per-arm polytope, so the mix is too.
        alpha = (act_lo - act_hi > kBudgetTol)
                    ? (budget - act_hi) / (act_lo - act_hi)
                    : 0.0;
        alpha = std::clamp(alpha, 0.0, 1.0);
    } else {
        sol_hi = sol_lo;  // lambda* = 0: unconstrained plan already fits B
    }

    LpDims dims{N, S, /*extended=*/true};
    LpSolution merged;
    merged.status = SolveStatus::Optimal;
    merged.x.assign(dims.num_vars(), 0.0);
    double objective = 0.0;
    for (int n = 0; n < N; ++n) {
        const int base = dims.z_index(n, 0, 0, 0);
        for (int j = 0; j < arms[n].vars(); ++j) {
            const double v = alpha * sol_lo[n][j] + (1.0 - alpha) * sol_hi[n][j];
            merged.x[base + j] = v;
            objective -= arms[n].base_cost[j] * v;  // base_cost is -r_tilde
        }
    }
    merged.objective_value = objective;

    PlanResult result;
    result.occupancy = occupancy_from_solution(merged, dims);
    result.objective = objective;
    return result;
}

}  // namespace

PlanResult solve_plan(const ConfidenceModel& conf, int budget,
                      const std::vector<double>& eta, bool include_fairness,
                      PlanMethod method) {
    if (method == PlanMethod::Auto) {
        const int vars =
            conf.num_arms * conf.num_states * kNumActions * conf.num_states;
        method = (vars <= kDirectVarLimit) ? PlanMethod::Direct : PlanMethod::Decomposed;
    }
    return (method == PlanMethod::Direct)
               ? plan_direct(conf, budget, eta, include_fairness)
               : plan_decomposed(conf, budget, eta, include_fairness);
}

}  // namespace rmabf
