// Episode-level ELP solving. Small problems go through the full extended LP;
// larger ones are decomposed per arm over the single coupling budget row,
// with a warm-started Lagrangian bisection on the budget price. Both paths
// return the same occupancy contract and agree to solver tolerance.

#pragma once

#include <vector>

#include "rmabf/lp.hpp"

namespace rmabf {

struct PlanResult {
    OccupancyMeasure occupancy;
    double objective = 0.0;  // optimistic reward value of the plan
};

enum class PlanMethod : std::uint8_t { Auto, Direct, Decomposed };

/// Solves the extended LP for the given confidence model. Throws RmabError
/// with "infeasible plan" if the LP is infeasible (possible only when the
/// fairness floors exceed the budget).
PlanResult solve_plan(const ConfidenceModel& conf, int budget,
                      const std::vector<double>& eta, bool include_fairness,
                      PlanMethod method = PlanMethod::Auto);

}  // namespace rmabf
