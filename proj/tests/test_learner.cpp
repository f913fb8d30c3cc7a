#include <cmath>
#include <numeric>

#include "doctest.h"
#include "rmabf/learner.hpp"
#include "test_util.hpp"

using namespace rmabf;

TEST_CASE("init_counts starts from zero and estimates fall back to uniform") {
    const Counts counts = init_counts(1, 2);
    for (long v : counts.visit[0]) CHECK(v == 0);
    for (long v : counts.trans[0]) CHECK(v == 0);
    const ConfidenceModel conf = empirical_estimates(counts);
    for (int s = 0; s < 2; ++s) {
        for (int a = 0; a < kNumActions; ++a) {
            CHECK(conf.p(0, s, a, 0) == doctest::Approx(0.5));
            CHECK(conf.p(0, s, a, 1) == doctest::Approx(0.5));
            CHECK(conf.r_tilde(0, s, a) == doctest::Approx(0.0));  // delta left 0
        }
    }
}

TEST_CASE("update_counts increments every statistic consistently") {
    Counts counts = init_counts(1, 3);
    update_counts(counts, 0, 1, 1, 0.5, 2);
    CHECK(counts.visit[0][counts.sa(1, 1)] == 1);
    CHECK(counts.trans[0][counts.sas(1, 1, 2)] == 1);
    CHECK(counts.reward_sum[0][counts.sa(1, 1)] == doctest::Approx(0.5));

    // Two records s -> s', one s -> s'' gives P_hat = 2/3, 1/3.
    update_counts(counts, 0, 0, 1, 1.0, 1);
    update_counts(counts, 0, 0, 1, 0.0, 1);
    update_counts(counts, 0, 0, 1, 1.0, 2);
    const ConfidenceModel conf = empirical_estimates(counts);
    CHECK(conf.p(0, 0, 1, 1) == doctest::Approx(2.0 / 3.0));
    CHECK(conf.p(0, 0, 1, 2) == doctest::Approx(1.0 / 3.0));
    CHECK(conf.r_hat[conf.sa_index(0, 0, 1)] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("empirical estimates: visit=4, trans=(1,3) and r_hat ratios") {
    Counts counts = init_counts(1, 2);
    update_counts(counts, 0, 0, 1, 1.0, 0);
    update_counts(counts, 0, 0, 1, 0.0, 1);
    update_counts(counts, 0, 0, 1, 1.0, 1);
    update_counts(counts, 0, 0, 1, 0.0, 1);
    const ConfidenceModel conf = empirical_estimates(counts);
    CHECK(conf.p(0, 0, 1, 0) == doctest::Approx(0.25));
    CHECK(conf.p(0, 0, 1, 1) == doctest::Approx(0.75));
    CHECK(conf.r_hat[conf.sa_index(0, 0, 1)] == doctest::Approx(0.5));
}

TEST_CASE("confidence radius reproduces the worked example") {
    const double delta = confidence_radius(8, 2, 160, 0.1, 6, 2, 3);
    CHECK(delta == doctest::Approx(std::sqrt(std::log(57600.0) / 16.0)).epsilon(1e-12));
    CHECK(delta == doctest::Approx(0.8277).epsilon(1e-4));
}

TEST_CASE("confidence radius scaling and zero-count rule") {
    const double base = confidence_radius(8, 2, 160, 0.1, 6, 2, 3);
    CHECK(confidence_radius(32, 2, 160, 0.1, 6, 2, 3) ==
          doctest::Approx(base / 2.0).epsilon(1e-12));
    CHECK(confidence_radius(0, 2, 160, 0.1, 6, 2, 3) ==
          doctest::Approx(confidence_radius(1, 2, 160, 0.1, 6, 2, 3)));
    // Nondecreasing in k at fixed count; k=1 matches k=2 via max(k-1,1).
    CHECK(confidence_radius(8, 5, 160, 0.1, 6, 2, 3) >= base);
    CHECK(confidence_radius(8, 1, 160, 0.1, 6, 2, 3) == doctest::Approx(base));
}

TEST_CASE("fairness quota uses a ceiling with float-product backoff") {
    CHECK(fairness_quota(0.3, 160) == 48);   // 160 * 0.3 = 48.000000000000007
    CHECK(fairness_quota(0.1, 160) == 16);
    CHECK(fairness_quota(0.25, 8) == 2);
    CHECK(fairness_quota(0.0, 100) == 0);
    CHECK(fairness_quota(0.101, 10) == 2);   // genuine fractional part rounds up
}

TEST_CASE("greedy schedule reproduces the synthetic-experiment length of 96") {
    std::vector<double> eta;
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < 100; ++i) eta.push_back(0.1 * (c + 1));
    }
    Rng rng(1);
    const auto schedule = greedy_exploration_schedule(eta, 160, 100, 300, rng);
    CHECK(schedule.size() == 96);  // ceil(9600 / 100)
}

TEST_CASE("greedy schedule is empty when all floors are zero") {
    Rng rng(2);
    CHECK(greedy_exploration_schedule(std::vector<double>(5, 0.0), 10, 2, 5, rng)
              .empty());
}

TEST_CASE("greedy schedule meets every quota and activates exactly B per epoch") {
    Rng rng(3);
    const std::vector<double> eta = {0.3, 0.5, 0.1, 0.25};
    const int H = 12, B = 2, N = 4;
    const auto schedule = greedy_exploration_schedule(eta, H, B, N, rng);
    long total_quota = 0;
    for (double e : eta) total_quota += fairness_quota(e, H);
    CHECK(schedule.size() == (total_quota + B - 1) / B);
    std::vector<long> pulls(N, 0);
    for (const ActionVector& a : schedule) {
        CHECK(std::accumulate(a.begin(), a.end(), 0) == B);
        for (int n = 0; n < N; ++n) pulls[n] += a[n];
    }
    for (int n = 0; n < N; ++n) CHECK(pulls[n] >= fairness_quota(eta[n], H));
}

TEST_CASE("greedy schedule rejects quotas that cannot fit the episode") {
    Rng rng(4);
    CHECK_THROWS_WITH_AS(
        greedy_exploration_schedule({0.9, 0.9, 0.9}, 2, 1, 3, rng),
        doctest::Contains("fairness quota exceeds episode budget"), RmabError);
}

TEST_CASE("plan_episode collapses onto the offline indices with huge counts") {
    const RmabInstance instance = test::swap_chain_instance();
    Counts counts = init_counts(1, 2);
    // Feed exact-model statistics in bulk so delta is tiny and P_hat exact.
    const long reps = 4000000000000L;  // drives delta below 1e-6
    for (int s = 0; s < 2; ++s) {
        for (int a = 0; a < kNumActions; ++a) {
            const int target = 1 - s;  // swap chain
            counts.visit[0][counts.sa(s, a)] = reps;
            counts.trans[0][counts.sas(s, a, target)] = reps;
            counts.reward_sum[0][counts.sa(s, a)] =
                instance.arms[0].reward_mean[s][a] * reps;
        }
    }
    LearnerConfig config;
    config.episodes = 2;
    config.horizon = 4;
    const EpisodePlan plan = plan_episode(counts, 2, config, 1, {0.0}, true);

    const StandardFormLP lp = build_offline_lp(instance);
    const LpSolution sol = solve_lp(lp);
    const IndexTable offline =
        fair_indices(occupancy_from_solution(sol, lp.dims));
    for (int s = 0; s < 2; ++s) {
        CHECK(plan.indices.omega[0][s] ==
              doctest::Approx(offline.omega[0][s]).epsilon(1e-4));
    }
}

TEST_CASE("plan_episode cold start still produces a plan") {
    const Counts counts = init_counts(2, 2);
    LearnerConfig config;
    config.episodes = 4;
    config.horizon = 4;
    const EpisodePlan plan = plan_episode(counts, 1, config, 1, {0.2, 0.2}, true);
    CHECK(plan.indices.num_arms() == 2);
    CHECK(plan.objective >= 0.0);
}

TEST_CASE("identical arms with identical counts get identical index columns") {
    const Counts counts = init_counts(3, 2);
    LearnerConfig config;
    config.episodes = 2;
    config.horizon = 4;
    const EpisodePlan plan = plan_episode(counts, 1, config, 1, {0.1, 0.1, 0.1}, true);
    CHECK(plan.indices.omega[0] == plan.indices.omega[1]);
    CHECK(plan.indices.omega[1] == plan.indices.omega[2]);
}

TEST_CASE("run_fair_ucrl with N=B activates every arm at every epoch") {
    RmabInstance instance;
    instance.arms = {make_lmss_arm(40), make_lmss_arm(80)};
    instance.budget = 2;
    instance.eta = {0.1, 0.1};
    instance.initial_states = {0, 0};
    LearnerConfig config;
    config.episodes = 1;
    config.horizon = 1;
    config.seed = 5;
    const TrialLog log = run_fair_ucrl(instance, config);
    REQUIRE(log.horizon == 1);
    CHECK(log.actions[0] == 1);
    CHECK(log.actions[1] == 1);
}

TEST_CASE("run_fair_ucrl is bit-identical across runs with one seed") {
    const RmabInstance instance = test::synthetic_instance(1);
    LearnerConfig config;
    config.episodes = 4;
    config.horizon = 6;
    config.seed = 77;
    const TrialLog a = run_fair_ucrl(instance, config);
    const TrialLog b = run_fair_ucrl(instance, config);
    CHECK(a.states == b.states);
    CHECK(a.actions == b.actions);
    CHECK(a.rewards == b.rewards);
    CHECK(a.episode_objectives == b.episode_objectives);
    CHECK(a.activation_counts == b.activation_counts);
}

TEST_CASE("budget invariant holds at every epoch of both learners") {
    const RmabInstance instance = test::synthetic_instance(1);
    LearnerConfig config;
    config.episodes = 4;
    config.horizon = 8;
    config.seed = 9;
    for (const bool gfair : {false, true}) {
        config.algorithm = gfair ? Algorithm::GFairUcrl : Algorithm::FairUcrl;
        const TrialLog log =
            gfair ? run_g_fair_ucrl(instance, config) : run_fair_ucrl(instance, config);
        for (int t = 0; t < log.horizon; ++t) {
            int active = 0;
            for (int n = 0; n < log.num_arms; ++n) active += log.actions[log.at(t, n)];
            CHECK(active == std::min(instance.budget, log.num_arms));
        }
    }
}

TEST_CASE("run_g_fair_ucrl meets every per-episode quota exactly") {
    const RmabInstance instance = test::synthetic_instance(2);
    LearnerConfig config;
    config.episodes = 5;
    config.horizon = 10;
    config.seed = 31;
    config.algorithm = Algorithm::GFairUcrl;
    const TrialLog log = run_g_fair_ucrl(instance, config);
    for (int k = 0; k < log.episodes; ++k) {
        for (int n = 0; n < log.num_arms; ++n) {
            CHECK(log.episode_activations[k * log.num_arms + n] >=
                  fairness_quota(instance.eta[n], config.horizon));
        }
    }
}

TEST_CASE("counts consistency after a full run") {
    const RmabInstance instance = test::synthetic_instance(1);
    LearnerConfig config;
    config.episodes = 6;
    config.horizon = 6;
    config.seed = 15;
    const TrialLog log = run_fair_ucrl(instance, config);
    // Rebuild counts from the log and check the structural invariants.
    Counts counts = init_counts(log.num_arms, instance.num_states());
    for (int t = 0; t + 1 <= log.horizon; ++t) {
        for (int n = 0; n < log.num_arms; ++n) {
            const int s = log.states[log.at(t, n)];
            const int a = log.actions[log.at(t, n)];
            const int s_next = (t + 1 < log.horizon)
                                   ? log.states[log.at(t + 1, n)]
                                   : s;  // last transition unobserved in the log
            if (t + 1 < log.horizon) {
                update_counts(counts, n, s, a, log.rewards[log.at(t, n)], s_next);
            }
        }
    }
    for (int n = 0; n < log.num_arms; ++n) {
        long total = 0;
        for (int s = 0; s < counts.num_states; ++s) {
            for (int a = 0; a < kNumActions; ++a) {
                long row = 0;
                for (int t2 = 0; t2 < counts.num_states; ++t2) {
                    row += counts.trans[n][counts.sas(s, a, t2)];
                }
                CHECK(row == counts.visit[n][counts.sa(s, a)]);
                total += counts.visit[n][counts.sa(s, a)];
            }
        }
        CHECK(total == log.horizon - 1);
    }
}
