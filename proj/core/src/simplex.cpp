#include "rmabf/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "rmabf/mdp.hpp"

namespace rmabf {

namespace {
constexpr double kPivotTol = 1e-9;
constexpr double kReducedCostTol = 1e-9;
constexpr double kPhaseOneTol = 1e-7;
constexpr long kIterationCap = 200000;
constexpr long kDegenerateStall = 512;  // pivots without progress before Bland
}  // namespace

void SimplexTableau::load(int num_vars, const std::vector<double>& objective,
                          const std::vector<SparseRow>& rows) {
    num_vars_ = num_vars;
    num_rows_ = static_cast<int>(rows.size());

    // Column layout: structural | one slack/surplus per inequality | artificials.
    int num_slack = 0;
    for (const auto& row : rows) {
        if (row.relation != Relation::Equal) ++num_slack;
    }
    artificial_begin_ = num_vars_ + num_slack;

    // Artificials are added lazily: a <= row with nonnegative rhs starts basic
    // on its slack; everything else gets an artificial.
    std::vector<int> artificial_of(num_rows_, -1);
    int num_artificial = 0;
    {
        for (int i = 0; i < num_rows_; ++i) {
            const bool flip = rows[i].rhs < 0.0;
            Relation rel = rows[i].relation;
            if (flip && rel != Relation::Equal) {
                rel = (rel == Relation::LessEqual) ? Relation::GreaterEqual
                                                   : Relation::LessEqual;
            }
            if (rel != Relation::LessEqual) {
                artificial_of[i] = artificial_begin_ + num_artificial++;
            }
        }
    }
    num_cols_ = artificial_begin_ + num_artificial;
    stride_ = num_cols_ + 1;

    tableau_.assign(static_cast<std::size_t>(num_rows_ + 1) * stride_, 0.0);
    basis_.assign(num_rows_, -1);
    cost_.assign(num_cols_, 0.0);
    for (int j = 0; j < num_vars_; ++j) cost_[j] = objective[j];

    int slack_col = num_vars_;
    for (int i = 0; i < num_rows_; ++i) {
        const SparseRow& row = rows[i];
        const double sign = (row.rhs < 0.0) ? -1.0 : 1.0;
        Relation rel = row.relation;
        if (sign < 0.0 && rel != Relation::Equal) {
            rel = (rel == Relation::LessEqual) ? Relation::GreaterEqual
                                               : Relation::LessEqual;
        }
        for (const auto& [var, coeff] : row.coeffs) {
            if (var < 0 || var >= num_vars_) {
                throw RmabError("simplex: row references out-of-range variable");
            }
            at(i, var) += sign * coeff;
        }
        at(i, num_cols_) = sign * row.rhs;

        if (row.relation != Relation::Equal) {
            at(i, slack_col) = (rel == Relation::LessEqual) ? 1.0 : -1.0;
            if (rel == Relation::LessEqual) basis_[i] = slack_col;
            ++slack_col;
        }
        if (artificial_of[i] >= 0) {
            at(i, artificial_of[i]) = 1.0;
            basis_[i] = artificial_of[i];
        }
    }

    solved_ = false;
    total_pivots_ = 0;
}

void SimplexTableau::rebuild_objective_row(bool phase_one) {
    // obj_row[j] = c_j - c_B . column_j given the tableau already holds B^-1 A.
    for (int j = 0; j <= num_cols_; ++j) at(num_rows_, j) = 0.0;
    for (int j = 0; j < num_cols_; ++j) {
        double c = 0.0;
        if (phase_one) {
            if (j >= artificial_begin_) c = 1.0;
        } else {
            c = cost_[j];
        }
        at(num_rows_, j) = c;
    }
    for (int i = 0; i < num_rows_; ++i) {
        const int b = basis_[i];
        double cb = phase_one ? (b >= artificial_begin_ ? 1.0 : 0.0) : cost_[b];
        if (cb == 0.0) continue;
        const double* row = &tableau_[static_cast<std::size_t>(i) * stride_];
        double* obj = &tableau_[static_cast<std::size_t>(num_rows_) * stride_];
        for (int j = 0; j <= num_cols_; ++j) obj[j] -= cb * row[j];
    }
}

void SimplexTableau::pivot(int prow, int pcol) {
    double* prow_ptr = &tableau_[static_cast<std::size_t>(prow) * stride_];
    const double inv = 1.0 / prow_ptr[pcol];
    for (int j = 0; j <= num_cols_; ++j) prow_ptr[j] *= inv;
    prow_ptr[pcol] = 1.0;

    for (int i = 0; i <= num_rows_; ++i) {
        if (i == prow) continue;
        double* row = &tableau_[static_cast<std::size_t>(i) * stride_];
        const double f = row[pcol];
        if (f == 0.0) continue;
        for (int j = 0; j <= num_cols_; ++j) row[j] -= f * prow_ptr[j];
        row[pcol] = 0.0;
    }
    basis_[prow] = pcol;
    ++total_pivots_;
}

SolveStatus SimplexTableau::run_phase(bool phase_one) {
    long stall = 0;
    bool bland = false;
    double last_obj = at(num_rows_, num_cols_);
    std::vector<char> banned;  // numerically-null improving columns, per basis
    bool any_banned = false;

    for (long iter = 0; iter < kIterationCap; ++iter) {
        const double* obj = &tableau_[static_cast<std::size_t>(num_rows_) * stride_];

        // Entering column: Dantzig rule, Bland once degeneracy stalls.
        int pcol = -1;
        if (bland) {
            for (int j = 0; j < num_cols_; ++j) {
                if (!phase_one && j >= artificial_begin_) break;
                if (any_banned && banned[j]) continue;
                if (obj[j] < -kReducedCostTol) { pcol = j; break; }
            }
        } else {
            double best = -kReducedCostTol;
            const int limit = phase_one ? num_cols_ : artificial_begin_;
            for (int j = 0; j < limit; ++j) {
                if (any_banned && banned[j]) continue;
                if (obj[j] < best) { best = obj[j]; pcol = j; }
            }
        }
        if (pcol < 0) return SolveStatus::Optimal;

        // Harris-style two-pass ratio test. Pass 1 computes the step bound
        // with a small feasibility slack: theta = min (rhs + slack) / a. The
        // slack widens the set of admissible leaving rows so pass 2 can pick
        // the largest pivot element among them — pivoting on a noise-level
        // element lets theta explode and drags sub-tolerance rows far
        // negative, which is exactly the failure the slack prevents. Each
        // pivot leaves basics no more than the slack below zero, and the
        // pre-pivot rhs clamp keeps that from compounding.
        constexpr double kFeasSlack = 1e-9;
        int prow = -1;
        double theta = std::numeric_limits<double>::infinity();
        for (int i = 0; i < num_rows_; ++i) {
            const double a = at(i, pcol);
            // A residual zero-level artificial should leave before anything
            // else, whatever the pivot sign, or it could re-enter at positive
            // level. Safe only on a solid pivot magnitude and a truly-zero
            // level: the entering variable lands at rhs/a, which must stay
            // within round-off of zero.
            if (!phase_one && basis_[i] >= artificial_begin_ &&
                std::abs(a) > 1e-6 &&
                std::abs(at(i, num_cols_)) <= 1e-9 * std::abs(a)) {
                prow = i;
                break;
            }
            if (a <= kPivotTol) continue;
            // rhs can sit a round-off hair below zero; a negative ratio would
            // derail the test, so clamp — the true ratio of a feasible basis
            // is nonnegative.
            const double bound = (std::max(at(i, num_cols_), 0.0) + kFeasSlack) / a;
            if (bound < theta) theta = bound;
        }
        if (prow < 0 && theta < std::numeric_limits<double>::infinity()) {
            // Pass 2: any row whose true ratio fits under theta is admissible;
            // take the largest pivot element (smallest basis index under
            // Bland's rule).
            double best_a = 0.0;
            for (int i = 0; i < num_rows_; ++i) {
                const double a = at(i, pcol);
                if (a <= kPivotTol) continue;
                if (std::max(at(i, num_cols_), 0.0) / a > theta) continue;
                if (bland) {
                    if (prow < 0 || basis_[i] < basis_[prow]) prow = i;
                } else if (a > best_a) {
                    best_a = a;
                    prow = i;
                }
            }
        }
        if (prow < 0) {
            // No usable pivot entry. With a clearly negative reduced cost this
            // is a real unbounded ray (impossible in phase 1); at noise level
            // it is round-off — ban the column and pick another.
            if (!phase_one && at(num_rows_, pcol) < -1e-6) {
                return SolveStatus::Unbounded;
            }
            if (banned.empty()) banned.assign(static_cast<std::size_t>(num_cols_), 0);
            banned[pcol] = 1;
            any_banned = true;
            continue;
        }

        // The ratio test admitted this row at a (clamped) nonnegative ratio, so
        // a negative rhs here is round-off. Dividing it by a small pivot
        // element would hand the entering variable a genuinely negative value,
        // so zero it first.
        if (at(prow, num_cols_) < 0.0) at(prow, num_cols_) = 0.0;
        pivot(prow, pcol);
        if (any_banned) {
            std::fill(banned.begin(), banned.end(), 0);  // basis changed
            any_banned = false;
        }

        const double new_obj = at(num_rows_, num_cols_);
        if (std::abs(new_obj - last_obj) < 1e-12) {
            if (++stall > kDegenerateStall) bland = true;
        } else {
            stall = 0;
            last_obj = new_obj;
        }
    }
    throw RmabError("simplex: iteration cap exceeded, cycling suspected");
}

void SimplexTableau::extract_solution() {
    x_.assign(num_vars_, 0.0);
    for (int i = 0; i < num_rows_; ++i) {
        if (basis_[i] < num_vars_) {
            double v = at(i, num_cols_);
            // Degenerate pivots can leave basics a round-off hair negative.
            if (v < 0.0 && v > -1e-7) v = 0.0;
            x_[basis_[i]] = v;
        }
    }
    objective_value_ = 0.0;
    for (int j = 0; j < num_vars_; ++j) objective_value_ += cost_[j] * x_[j];
}

SolveStatus SimplexTableau::solve() {
    if (num_cols_ > artificial_begin_) {
        rebuild_objective_row(/*phase_one=*/true);
        const SolveStatus phase1 = run_phase(/*phase_one=*/true);
        if (phase1 == SolveStatus::Unbounded) {
            throw RmabError("simplex: phase-1 unbounded (internal error)");
        }
        if (-at(num_rows_, num_cols_) > kPhaseOneTol) {
            solved_ = false;
            return SolveStatus::Infeasible;
        }
        // Drive any residual (degenerate) artificials out of the basis.
        for (int i = 0; i < num_rows_; ++i) {
            if (basis_[i] < artificial_begin_) continue;
            int pcol = -1;
            double best = kPivotTol;
            for (int j = 0; j < artificial_begin_; ++j) {
                if (std::abs(at(i, j)) > best) {
                    best = std::abs(at(i, j));
                    pcol = j;
                }
            }
            if (pcol >= 0) pivot(i, pcol);
            // A fully-zero row is a redundant constraint; the artificial stays
            // basic at level zero, which is harmless.
        }
    }

    rebuild_objective_row(/*phase_one=*/false);
    const SolveStatus status = run_phase(/*phase_one=*/false);
    if (status == SolveStatus::Optimal) {
        extract_solution();
        solved_ = true;
    } else {
        solved_ = false;
    }
    return status;
}

SolveStatus SimplexTableau::resolve_with_objective(const std::vector<double>& objective) {
    if (!solved_) throw RmabError("simplex: resolve requires a prior optimal solve");
    for (int j = 0; j < num_vars_; ++j) cost_[j] = objective[j];
    rebuild_objective_row(/*phase_one=*/false);
    const SolveStatus status = run_phase(/*phase_one=*/false);
    if (status == SolveStatus::Optimal) {
        extract_solution();
    } else {
        solved_ = false;
    }
    return status;
}

}  // namespace rmabf
