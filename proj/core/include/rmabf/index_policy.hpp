// The fair index (planned per-state activation probability) and top-B
// execution with seeded random tie-breaking.

#pragma once

#include <vector>

#include "rmabf/env.hpp"
#include "rmabf/lp.hpp"

namespace rmabf {

/// omega[n][s]: activation-probability index for arm n in state s, in [0,1].
struct IndexTable {
    std::vector<std::vector<double>> omega;

    int num_arms() const { return static_cast<int>(omega.size()); }
};

using ActionVector = std::vector<std::uint8_t>;  // a[n] in {0,1}

/// omega_n(s) = active mass / total mass at state s; zero-mass states index 0.
IndexTable fair_indices(const OccupancyMeasure& occupancy);

/// Activates exactly min(B, N) arms with the highest indices at the current
/// states. Ties break by a random permutation drawn from `rng`, so duplicate
/// arms are not systematically starved.
ActionVector select_top_b(const IndexTable& indices, const std::vector<int>& states,
                          int budget, Rng& rng);

}  // namespace rmabf
