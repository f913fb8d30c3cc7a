// Dense two-phase primal simplex over a full tableau. Small by design: the
// planning LPs here stay in the hundreds-of-rows range, where a dense tableau
// with a deterministic pivot rule beats sparse machinery on simplicity and
// reproducibility. Supports objective swaps on a kept basis, which the
// episode planner uses for warm-started Lagrangian re-solves.

#pragma once

#include <cstdint>
#include <vector>

namespace rmabf {

enum class Relation : std::uint8_t { LessEqual, Equal, GreaterEqual };

struct SparseRow {
    std::vector<std::pair<int, double>> coeffs;  // (variable index, coefficient)
    Relation relation = Relation::LessEqual;
    double rhs = 0.0;
};

enum class SolveStatus : std::uint8_t { Optimal, Infeasible, Unbounded };

/// Minimizes c.x subject to the loaded rows and x >= 0.
class SimplexTableau {
public:
    void load(int num_vars, const std::vector<double>& objective,
              const std::vector<SparseRow>& rows);

    SolveStatus solve();

    /// Replaces the (minimization) objective while keeping the current basis,
    /// then re-optimizes. Only valid after a solve() that returned Optimal.
    SolveStatus resolve_with_objective(const std::vector<double>& objective);

    const std::vector<double>& solution() const { return x_; }
    double objective_value() const { return objective_value_; }
    long total_pivots() const { return total_pivots_; }

private:
    SolveStatus run_phase(bool phase_one);
    void pivot(int row, int col);
    void rebuild_objective_row(bool phase_one);
    void extract_solution();

    int num_vars_ = 0;
    int num_rows_ = 0;
    int num_cols_ = 0;        // structural + slack + artificial
    int artificial_begin_ = 0;
    int stride_ = 0;
    std::vector<double> tableau_;   // (num_rows_+1) x (num_cols_+1), row-major
    std::vector<double> cost_;      // phase-2 cost per column (0 beyond structural)
    std::vector<int> basis_;
    std::vector<double> x_;
    double objective_value_ = 0.0;
    long total_pivots_ = 0;
    bool solved_ = false;

    double& at(int r, int c) { return tableau_[static_cast<std::size_t>(r) * stride_ + c]; }
    double at(int r, int c) const {
        return tableau_[static_cast<std::size_t>(r) * stride_ + c];
    }
};

}  // namespace rmabf
