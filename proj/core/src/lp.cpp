#include "rmabf/lp.hpp"

#include <algorithm>
#include <cmath>

namespace rmabf {

namespace {
constexpr double kOccupancyTol = 1e-7;
constexpr double kClipTol = 1e-9;
}

double OccupancyMeasure::activation(int n) const {
    double total = 0.0;
    for (int s = 0; s < num_states; ++s) total += zeta_at(n, s, 1);
    return total;
}

ConfidenceModel exact_confidence_model(const RmabInstance& instance) {
    const int N = instance.num_arms();
    const int S = instance.num_states();
    ConfidenceModel conf;
    conf.num_arms = N;
    conf.num_states = S;
    conf.p_hat.assign(static_cast<std::size_t>(N) * S * kNumActions * S, 0.0);
    conf.r_hat.assign(static_cast<std::size_t>(N) * S * kNumActions, 0.0);
    conf.delta.assign(static_cast<std::size_t>(N) * S * kNumActions, 0.0);
    for (int n = 0; n < N; ++n) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < kNumActions; ++a) {
                const int sa = conf.sa_index(n, s, a);
                conf.r_hat[sa] = instance.arms[n].reward_mean[s][a];
                for (int t = 0; t < S; ++t) {
                    conf.p_hat[sa * S + t] = instance.arms[n].transition[a][s][t];
                }
            }
        }
    }
    return conf;
}

StandardFormLP build_offline_lp(const RmabInstance& instance) {
    const int N = instance.num_arms();
    const int S = instance.num_states();

    StandardFormLP lp;
    lp.sense = Sense::Maximize;
    lp.dims = LpDims{N, S, /*extended=*/false};
    lp.objective.assign(lp.dims.num_vars(), 0.0);

    for (int n = 0; n < N; ++n) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < kNumActions; ++a) {
                lp.objective[lp.dims.zeta_index(n, s, a)] =
                    instance.arms[n].reward_mean[s][a];
            }
        }
    }

    // Budget: sum_n sum_s zeta_n(s,1) <= B.
    SparseRow budget;
    budget.relation = Relation::LessEqual;
    budget.rhs = instance.budget;
    for (int n = 0; n < N; ++n) {
        for (int s = 0; s < S; ++s) {
            budget.coeffs.emplace_back(lp.dims.zeta_index(n, s, 1), 1.0);
        }
    }
    lp.ineq.push_back(std::move(budget));

    // Fairness floors, one per arm: -sum_s zeta_n(s,1) <= -eta_n.
    for (int n = 0; n < N; ++n) {
        SparseRow fair;
        fair.relation = Relation::LessEqual;
        fair.rhs = -instance.eta[n];
        for (int s = 0; s < S; ++s) {
            fair.coeffs.emplace_back(lp.dims.zeta_index(n, s, 1), -1.0);
        }
        lp.ineq.push_back(std::move(fair));
    }

    // Flow balance under the true kernels: for each (n, s),
    // sum_a zeta_n(s,a) - sum_{s',a'} P_n(s|s',a') zeta_n(s',a') = 0.
    for (int n = 0; n < N; ++n) {
        const ArmModel& arm = instance.arms[n];
        for (int s = 0; s < S; ++s) {
            SparseRow flow;
            flow.relation = Relation::Equal;
            flow.rhs = 0.0;
            std::vector<double> coeff(S * kNumActions, 0.0);
            for (int a = 0; a < kNumActions; ++a) coeff[s * kNumActions + a] += 1.0;
            for (int sp = 0; sp < S; ++sp) {
                for (int ap = 0; ap < kNumActions; ++ap) {
                    coeff[sp * kNumActions + ap] -= arm.transition[ap][sp][s];
                }
            }
            for (int j = 0; j < S * kNumActions; ++j) {
                if (coeff[j] != 0.0) {
                    flow.coeffs.emplace_back(lp.dims.zeta_index(n, 0, 0) + j, coeff[j]);
                }
            }
            lp.eq.push_back(std::move(flow));
        }
    }

    // Normalization: each arm's occupancy is a probability measure.
    for (int n = 0; n < N; ++n) {
        SparseRow norm;
        norm.relation = Relation::Equal;
        norm.rhs = 1.0;
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < kNumActions; ++a) {
                norm.coeffs.emplace_back(lp.dims.zeta_index(n, s, a), 1.0);
            }
        }
        lp.eq.push_back(std::move(norm));
    }

    return lp;
}

StandardFormLP build_elp(const ConfidenceModel& conf, int budget,
                         const std::vector<double>& eta, bool include_fairness) {
    const int N = conf.num_arms;
    const int S = conf.num_states;

    StandardFormLP lp;
    lp.sense = Sense::Maximize;
    lp.dims = LpDims{N, S, /*extended=*/true};
    lp.objective.assign(lp.dims.num_vars(), 0.0);

    for (int n = 0; n < N; ++n) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < kNumActions; ++a) {
                const double r = conf.r_tilde(n, s, a);
                for (int t = 0; t < S; ++t) {
                    lp.objective[lp.dims.z_index(n, s, a, t)] = r;
                }
            }
        }
    }

    SparseRow budget_row;
    budget_row.relation = Relation::LessEqual;
    budget_row.rhs = budget;
    for (int n = 0; n < N; ++n) {
        for (int s = 0; s < S; ++s) {
            for (int t = 0; t < S; ++t) {
                budget_row.coeffs.emplace_back(lp.dims.z_index(n, s, 1, t), 1.0);
            }
        }
    }
    lp.ineq.push_back(std::move(budget_row));

    if (include_fairness) {
        for (int n = 0; n < N; ++n) {
            SparseRow fair;
            fair.relation = Relation::LessEqual;
            fair.rhs = -eta[n];
            for (int s = 0; s < S; ++s) {
                for (int t = 0; t < S; ++t) {
                    fair.coeffs.emplace_back(lp.dims.z_index(n, s, 1, t), -1.0);
                }
            }
            lp.ineq.push_back(std::move(fair));
        }
    }

    // Flow balance directly on z: outflow of s equals inflow into s.
    for (int n = 0; n < N; ++n) {
        for (int s = 0; s < S; ++s) {
            SparseRow flow;
            flow.relation = Relation::Equal;
            flow.rhs = 0.0;
            std::vector<double> coeff(lp.dims.vars_per_arm(), 0.0);
            const int base = lp.dims.z_index(n, 0, 0, 0);
            for (int a = 0; a < kNumActions; ++a) {
                for (int t = 0; t < S; ++t) {
                    coeff[lp.dims.z_index(0, s, a, t)] += 1.0;
                }
            }
            for (int sp = 0; sp < S; ++sp) {
                for (int ap = 0; ap < kNumActions; ++ap) {
                    coeff[lp.dims.z_index(0, sp, ap, s)] -= 1.0;
                }
            }
            for (int j = 0; j < lp.dims.vars_per_arm(); ++j) {
                if (coeff[j] != 0.0) flow.coeffs.emplace_back(base + j, coeff[j]);
            }
            lp.eq.push_back(std::move(flow));
        }
    }

    for (int n = 0; n < N; ++n) {
        SparseRow norm;
        norm.relation = Relation::Equal;
        norm.rhs = 1.0;
        const int base = lp.dims.z_index(n, 0, 0, 0);
        for (int j = 0; j < lp.dims.vars_per_arm(); ++j) {
            norm.coeffs.emplace_back(base + j, 1.0);
        }
        lp.eq.push_back(std::move(norm));
    }

    // Confidence-ball rows, linearized by the row mass w = sum_y z(s,a,y):
    //   z(s,a,s') - hi * w <= 0 and lo * w - z(s,a,s') <= 0.
    for (int n = 0; n < N; ++n) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < kNumActions; ++a) {
                const int sa = conf.sa_index(n, s, a);
                const double d = conf.delta[sa];
                for (int t = 0; t < S; ++t) {
                    const double hi = std::min(1.0, conf.p(n, s, a, t) + d);
                    const double lo = std::max(0.0, conf.p(n, s, a, t) - d);

                    SparseRow upper;
                    upper.relation = Relation::LessEqual;
                    upper.rhs = 0.0;
                    for (int y = 0; y < S; ++y) {
                        double c = -hi + (y == t ? 1.0 : 0.0);
                        if (c != 0.0) {
                            upper.coeffs.emplace_back(lp.dims.z_index(n, s, a, y), c);
                        }
                    }
                    lp.ineq.push_back(std::move(upper));

                    SparseRow lower;
                    lower.relation = Relation::LessEqual;
                    lower.rhs = 0.0;
                    for (int y = 0; y < S; ++y) {
                        double c = lo - (y == t ? 1.0 : 0.0);
                        if (c != 0.0) {
                            lower.coeffs.emplace_back(lp.dims.z_index(n, s, a, y), c);
                        }
                    }
                    lp.ineq.push_back(std::move(lower));
                }
            }
        }
    }

    return lp;
}

LpSolution solve_lp(const StandardFormLP& lp) {
    std::vector<double> objective = lp.objective;
    if (lp.sense == Sense::Maximize) {
        for (double& c : objective) c = -c;
    }
    std::vector<SparseRow> rows;
    rows.reserve(lp.ineq.size() + lp.eq.size());
    rows.insert(rows.end(), lp.ineq.begin(), lp.ineq.end());
    rows.insert(rows.end(), lp.eq.begin(), lp.eq.end());

    SimplexTableau tableau;
    tableau.load(static_cast<int>(lp.objective.size()), objective, rows);
    LpSolution sol;
    sol.status = tableau.solve();
    if (sol.status != SolveStatus::Optimal) return sol;

    sol.x = tableau.solution();
    sol.objective_value =
        (lp.sense == Sense::Maximize) ? -tableau.objective_value()
                                      : tableau.objective_value();
    return sol;
}

OccupancyMeasure occupancy_from_solution(const LpSolution& sol, const LpDims& dims) {
    if (sol.status != SolveStatus::Optimal) {
        throw RmabError("occupancy_from_solution: solution is not Optimal");
    }
    const int N = dims.num_arms;
    const int S = dims.num_states;

    OccupancyMeasure occ;
    occ.num_arms = N;
    occ.num_states = S;
    occ.zeta.assign(N, std::vector<double>(S * kNumActions, 0.0));
    if (dims.extended) {
        occ.z.assign(N, std::vector<double>(S * kNumActions * S, 0.0));
    }

    auto clip = [](double v) {
        if (v < 0.0) {
            if (v < -kClipTol) {
                throw RmabError("occupancy_from_solution: solver inconsistency "
                                "(negative occupancy)");
            }
            return 0.0;
        }
        return v;
    };

    for (int n = 0; n < N; ++n) {
        if (dims.extended) {
            for (int s = 0; s < S; ++s) {
                for (int a = 0; a < kNumActions; ++a) {
                    for (int t = 0; t < S; ++t) {
                        const double v = clip(sol.x[dims.z_index(n, s, a, t)]);
                        occ.z[n][(s * kNumActions + a) * S + t] = v;
                        occ.zeta[n][s * kNumActions + a] += v;
                    }
                }
            }
        } else {
            for (int s = 0; s < S; ++s) {
                for (int a = 0; a < kNumActions; ++a) {
                    occ.zeta[n][s * kNumActions + a] =
                        clip(sol.x[dims.zeta_index(n, s, a)]);
                }
            }
        }

        double mass = 0.0;
        for (double v : occ.zeta[n]) mass += v;
        if (std::abs(mass - 1.0) > kOccupancyTol) {
            throw RmabError("occupancy_from_solution: solver inconsistency "
                            "(occupancy mass != 1)");
        }
        if (dims.extended) {
            for (int s = 0; s < S; ++s) {
                double outflow = 0.0, inflow = 0.0;
                for (int a = 0; a < kNumActions; ++a) {
                    for (int t = 0; t < S; ++t) {
                        outflow += occ.z_at(n, s, a, t);
                        inflow += occ.z_at(n, t, a, s);
                    }
                }
                if (std::abs(outflow - inflow) > kOccupancyTol) {
                    throw RmabError("occupancy_from_solution: solver inconsistency "
                                    "(flow imbalance)");
                }
            }
        }
    }
    return occ;
}

}  // namespace rmabf
