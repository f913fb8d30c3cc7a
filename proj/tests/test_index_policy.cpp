#include <numeric>

#include "doctest.h"
#include "rmabf/index_policy.hpp"
#include "test_util.hpp"

using namespace rmabf;

namespace {

/// One-arm occupancy with given active/passive masses in each state.
OccupancyMeasure make_occupancy(const std::vector<std::pair<double, double>>& sa) {
    OccupancyMeasure occ;
    occ.num_arms = 1;
    occ.num_states = static_cast<int>(sa.size());
    occ.zeta.assign(1, std::vector<double>(occ.num_states * kNumActions, 0.0));
    occ.z.assign(1, std::vector<double>(
                        occ.num_states * kNumActions * occ.num_states, 0.0));
    for (int s = 0; s < occ.num_states; ++s) {
        occ.zeta[0][s * kNumActions + 0] = sa[s].first;
        occ.zeta[0][s * kNumActions + 1] = sa[s].second;
        // Concentrate z mass arbitrarily on s' = 0; the index only marginalizes.
        occ.z[0][(s * kNumActions + 0) * occ.num_states] = sa[s].first;
        occ.z[0][(s * kNumActions + 1) * occ.num_states] = sa[s].second;
    }
    return occ;
}

}  // namespace

TEST_CASE("fair index is the active-over-total ratio") {
    const OccupancyMeasure occ = make_occupancy({{0.1, 0.3}, {0.6, 0.0}});
    const IndexTable idx = fair_indices(occ);
    CHECK(idx.omega[0][0] == doctest::Approx(0.75));
    CHECK(idx.omega[0][1] == doctest::Approx(0.0));
}

TEST_CASE("fair index is 0 on zero-mass states") {
    const OccupancyMeasure occ = make_occupancy({{0.0, 0.0}, {0.5, 0.5}});
    const IndexTable idx = fair_indices(occ);
    CHECK(idx.omega[0][0] == 0.0);
    CHECK(idx.omega[0][1] == doctest::Approx(0.5));
}

TEST_CASE("select_top_b activates the B highest-indexed arms") {
    IndexTable idx;
    idx.omega = {{0.9}, {0.5}, {0.7}};
    Rng rng(3);
    const ActionVector a = select_top_b(idx, {0, 0, 0}, 2, rng);
    CHECK(a[0] == 1);
    CHECK(a[1] == 0);
    CHECK(a[2] == 1);
}

TEST_CASE("select_top_b activates exactly min(B, N) arms") {
    IndexTable idx;
    idx.omega = {{0.2}, {0.2}, {0.2}};
    Rng rng(5);
    for (int budget : {1, 2, 3, 7}) {
        const ActionVector a = select_top_b(idx, {0, 0, 0}, budget, rng);
        CHECK(std::accumulate(a.begin(), a.end(), 0) == std::min(budget, 3));
    }
}

TEST_CASE("tie-breaking is seeded and reproducible") {
    IndexTable idx;
    idx.omega = {{0.5}, {0.5}, {0.5}, {0.5}};
    Rng rng_a(11), rng_b(11);
    const ActionVector a = select_top_b(idx, {0, 0, 0, 0}, 1, rng_a);
    const ActionVector b = select_top_b(idx, {0, 0, 0, 0}, 1, rng_b);
    CHECK(a == b);
    CHECK(std::accumulate(a.begin(), a.end(), 0) == 1);
}

TEST_CASE("tie-breaking does not starve any duplicate arm") {
    IndexTable idx;
    idx.omega = {{0.5}, {0.5}, {0.5}, {0.5}};
    Rng rng(13);
    std::vector<int> hits(4, 0);
    for (int i = 0; i < 4000; ++i) {
        const ActionVector a = select_top_b(idx, {0, 0, 0, 0}, 1, rng);
        for (int n = 0; n < 4; ++n) hits[n] += a[n];
    }
    for (int n = 0; n < 4; ++n) CHECK(hits[n] > 700);  // fair share is 1000
}

TEST_CASE("index monotonicity in the active mass") {
    const IndexTable low = fair_indices(make_occupancy({{0.4, 0.1}}));
    const IndexTable high = fair_indices(make_occupancy({{0.4, 0.3}}));
    CHECK(high.omega[0][0] > low.omega[0][0]);
}
