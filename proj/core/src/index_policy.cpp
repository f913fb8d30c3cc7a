#include "rmabf/index_policy.hpp"

#include <algorithm>
#include <numeric>

namespace rmabf {

IndexTable fair_indices(const OccupancyMeasure& occupancy) {
    const int N = occupancy.num_arms;
    const int S = occupancy.num_states;
    IndexTable table;
    table.omega.assign(N, std::vector<double>(S, 0.0));
    for (int n = 0; n < N; ++n) {
        for (int s = 0; s < S; ++s) {
            const double active = occupancy.zeta_at(n, s, 1);
            const double total = active + occupancy.zeta_at(n, s, 0);
            table.omega[n][s] = (total > 1e-9) ? active / total : 0.0;
        }
    }
    return table;
}

ActionVector select_top_b(const IndexTable& indices, const std::vector<int>& states,
                          int budget, Rng& rng) {
    const int N = indices.num_arms();
    const int chosen = std::min(budget, N);

    std::vector<int> tie_rank(N);
    std::iota(tie_rank.begin(), tie_rank.end(), 0);
    std::shuffle(tie_rank.begin(), tie_rank.end(), rng);

    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        const double wl = indices.omega[lhs][states[lhs]];
        const double wr = indices.omega[rhs][states[rhs]];
        if (wl != wr) return wl > wr;
        return tie_rank[lhs] < tie_rank[rhs];
    });

    ActionVector actions(N, 0);
    for (int i = 0; i < chosen; ++i) actions[order[i]] = 1;
    return actions;
}

}  // namespace rmabf
