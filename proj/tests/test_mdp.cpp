#include <cmath>

#include "doctest.h"
#include "rmabf/env.hpp"
#include "rmabf/mdp.hpp"
#include "test_util.hpp"

using namespace rmabf;

TEST_CASE("validate_instance accepts a boundary-feasible instance") {
    Rng rng(1);
    RmabInstance instance;
    instance.arms = {test::random_arm(2, rng), test::random_arm(2, rng)};
    instance.budget = 1;
    instance.eta = {0.5, 0.5};  // sum == B exactly
    instance.initial_states = {0, 0};
    CHECK(validate_instance(instance).ok);
}

TEST_CASE("validate_instance flags fairness floors exceeding the budget") {
    Rng rng(2);
    RmabInstance instance;
    instance.arms = {test::random_arm(2, rng), test::random_arm(2, rng)};
    instance.budget = 1;
    instance.eta = {0.6, 0.6};
    instance.initial_states = {0, 0};
    const ValidationReport report = validate_instance(instance);
    CHECK_FALSE(report.ok);
    bool found = false;
    for (const auto& [code, message] : report.violations) {
        if (test::contains(message, "exceed") || test::contains(code, "eta")) found = true;
    }
    CHECK(found);
}

TEST_CASE("validate_instance flags a non-stochastic kernel row") {
    Rng rng(3);
    RmabInstance instance;
    instance.arms = {test::random_arm(2, rng)};
    instance.arms[0].transition[1][0] = {0.5, 0.4};  // sums to 0.9
    instance.budget = 1;
    instance.eta = {0.1};
    instance.initial_states = {0};
    CHECK_FALSE(validate_instance(instance).ok);
}

TEST_CASE("validate_instance flags nonzero passive reward and out-of-range mean") {
    Rng rng(4);
    RmabInstance instance;
    instance.arms = {test::random_arm(2, rng)};
    instance.arms[0].reward_mean[0][0] = 0.2;
    instance.arms[0].reward_mean[1][1] = 1.5;
    instance.budget = 1;
    instance.eta = {0.1};
    instance.initial_states = {0};
    const ValidationReport report = validate_instance(instance);
    CHECK_FALSE(report.ok);
    CHECK(report.violations.size() >= 2);
}

TEST_CASE("stationary_distribution of the swap chain is uniform") {
    const auto pi = stationary_distribution({{0.0, 1.0}, {1.0, 0.0}});
    CHECK(pi[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pi[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("stationary_distribution rejects a reducible chain") {
    CHECK_THROWS_AS(stationary_distribution({{1.0, 0.0}, {0.0, 1.0}}), RmabError);
}

TEST_CASE("stationary_distribution matches the hand-solved 2-state chain") {
    const auto pi = stationary_distribution({{0.9, 0.1}, {0.2, 0.8}});
    CHECK(pi[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(pi[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("stationary_distribution output is a fixed point") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const int S = 2 + static_cast<int>(rng() % 5);
        std::vector<std::vector<double>> kernel(S);
        for (auto& row : kernel) row = test::random_stochastic_row(S, rng);
        const auto pi = stationary_distribution(kernel);
        double total = 0.0;
        for (double v : pi) total += v;
        CHECK(std::abs(total - 1.0) <= 1e-9);
        for (int t = 0; t < S; ++t) {
            double next = 0.0;
            for (int s = 0; s < S; ++s) next += pi[s] * kernel[s][t];
            CHECK(std::abs(next - pi[t]) <= 1e-8);
        }
    }
}

TEST_CASE("sampled transitions match the kernel within 3-sigma binomial bounds") {
    Rng rng(7);
    const ArmModel arm = test::random_arm(3, rng);
    const int kSamples = 100000;
    for (int a = 0; a < kNumActions; ++a) {
        std::vector<int> hits(arm.num_states, 0);
        for (int i = 0; i < kSamples; ++i) {
            ++hits[step_arm(arm, 1, a, rng).next_state];
        }
        for (int t = 0; t < arm.num_states; ++t) {
            const double p = arm.transition[a][1][t];
            const double sigma = std::sqrt(p * (1.0 - p) / kSamples);
            CHECK(std::abs(hits[t] / static_cast<double>(kSamples) - p) <=
                  3.0 * sigma + 1e-12);
        }
    }
}
