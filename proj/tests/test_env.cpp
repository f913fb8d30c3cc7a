#include <cmath>

#include "doctest.h"
#include "rmabf/env.hpp"
#include "test_util.hpp"

using namespace rmabf;

namespace {

RmabInstance single(const ArmModel& arm, double eta = 0.0) {
    RmabInstance instance;
    instance.arms = {arm};
    instance.budget = 1;
    instance.eta = {eta};
    instance.initial_states = {0};
    return instance;
}

}  // namespace

TEST_CASE("birth-death class 1 interior transition probabilities") {
    const ArmModel arm = make_birth_death_arm(3.0, 5.0, 6, 0.1);
    for (int a = 0; a < kNumActions; ++a) {
        for (int s = 1; s < 5; ++s) {
            CHECK(arm.transition[a][s][s + 1] == doctest::Approx(0.375).epsilon(1e-15));
            CHECK(arm.transition[a][s][s - 1] == doctest::Approx(0.625).epsilon(1e-15));
        }
    }
}

TEST_CASE("birth-death boundary states reflect out-of-range mass to self-loops") {
    const ArmModel arm = make_birth_death_arm(3.0, 5.0, 6, 0.1);
    CHECK(arm.transition[1][0][1] == doctest::Approx(0.375));
    CHECK(arm.transition[1][0][0] == doctest::Approx(0.625));
    CHECK(arm.transition[1][5][4] == doctest::Approx(0.625));
    CHECK(arm.transition[1][5][5] == doctest::Approx(0.375));
}

TEST_CASE("birth-death reward means are s * slope") {
    const ArmModel arm = make_birth_death_arm(3.0, 5.0, 6, 0.1);
    CHECK(arm.reward_mean[5][1] == doctest::Approx(0.5));
    CHECK(arm.reward_mean[0][1] == 0.0);
    CHECK_THROWS_AS(make_birth_death_arm(3.0, 5.0, 6, 0.3), RmabError);  // 5*0.3 > 1
}

TEST_CASE("CPAP cluster 1 passive kernel matches the published diagram bit-exactly") {
    Rng rng(0);
    const ArmModel arm = make_cpap_arm(1, 0.0, 0.0, rng);
    // States 0/1/2 are the diagram's 1/2/3.
    CHECK(arm.transition[0][0][0] == 0.0385);
    CHECK(arm.transition[0][0][2] == 0.9615);
    CHECK(arm.transition[0][2][2] == 0.9498);
    CHECK(arm.transition[0][2][0] == 0.0257);
    CHECK(arm.transition[0][2][1] == 0.0245);
    CHECK(arm.transition[0][1][2] == 1.0);
}

TEST_CASE("CPAP cluster 2 passive kernel matches the published diagram bit-exactly") {
    Rng rng(0);
    const ArmModel arm = make_cpap_arm(2, 0.0, 0.0, rng);
    CHECK(arm.transition[0][0][0] == 0.7427);
    CHECK(arm.transition[0][1][0] == 0.3399);
    CHECK(arm.transition[0][2][2] == 0.6657);
}

TEST_CASE("CPAP boost=0 leaves the active kernel equal to the passive kernel") {
    Rng rng(0);
    const ArmModel arm = make_cpap_arm(1, 0.0, 0.0, rng);
    for (int s = 0; s < 3; ++s) {
        for (int t = 0; t < 3; ++t) {
            CHECK(arm.transition[1][s][t] == arm.transition[0][s][t]);
        }
    }
}

TEST_CASE("CPAP boost shifts mass toward the top adherence state") {
    Rng rng(0);
    const ArmModel arm = make_cpap_arm(2, 0.3, 0.0, rng);
    for (int s = 0; s < 3; ++s) {
        CHECK(arm.transition[1][s][2] >= arm.transition[0][s][2]);
        double sum = 0.0;
        for (int t = 0; t < 3; ++t) sum += arm.transition[1][s][t];
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("RTE worker with q=0.495 matches the listed probability") {
    const ArmModel arm = make_rte_arm(0.495);
    CHECK(arm.transition[1][0][1] == 0.495);
    CHECK(arm.transition[1][1][1] == 0.495);
    CHECK(arm.transition[0][0][0] == 1.0);
    CHECK(arm.reward_mean[1][1] == 1.0);
    CHECK(arm.reward_mean[0][1] == 0.0);
}

TEST_CASE("RTE extremes absorb under activation") {
    CHECK(make_rte_arm(1.0).transition[1][0][1] == 1.0);
    CHECK(make_rte_arm(0.0).transition[1][1][0] == 1.0);
    CHECK_THROWS_AS(make_rte_arm(1.5), RmabError);
}

TEST_CASE("LMSS kernels match the published table bit-exactly") {
    const ArmModel a40 = make_lmss_arm(40);
    CHECK(a40.transition[1][0][0] == 0.9155);
    CHECK(a40.transition[1][0][1] == doctest::Approx(0.0845).epsilon(1e-15));
    CHECK(a40.transition[1][1][0] == 0.0811);
    CHECK(a40.transition[1][1][1] == doctest::Approx(0.9189).epsilon(1e-15));

    const ArmModel a80 = make_lmss_arm(80);
    CHECK(a80.transition[1][0][0] == 0.9268);
    CHECK(a80.transition[1][1][0] == 0.2667);

    const ArmModel a60 = make_lmss_arm(60);
    CHECK(a60.transition[1][1][1] == doctest::Approx(0.8).epsilon(1e-15));

    CHECK_THROWS_AS(make_lmss_arm(50), RmabError);
}

TEST_CASE("LMSS passive and active kernels coincide") {
    const ArmModel arm = make_lmss_arm(70);
    for (int s = 0; s < 2; ++s) {
        for (int t = 0; t < 2; ++t) {
            CHECK(arm.transition[0][s][t] == arm.transition[1][s][t]);
        }
    }
}

TEST_CASE("every builder output passes instance validation") {
    Rng rng(5);
    CHECK(validate_instance(single(make_birth_death_arm(9.0, 5.0, 6, 0.1))).ok);
    CHECK(validate_instance(single(make_cpap_arm(1, 0.2, 0.05, rng))).ok);
    CHECK(validate_instance(single(make_cpap_arm(2, 0.5, 0.0, rng))).ok);
    CHECK(validate_instance(single(make_rte_arm(0.45))).ok);
    for (int deg : {40, 60, 70, 80}) {
        CHECK(validate_instance(single(make_lmss_arm(deg))).ok);
    }
}

TEST_CASE("noise-free builders are bit-exact across calls") {
    Rng rng_a(1), rng_b(1);
    const ArmModel a = make_cpap_arm(1, 0.1, 0.0, rng_a);
    const ArmModel b = make_cpap_arm(1, 0.1, 0.0, rng_b);
    CHECK(a.transition == b.transition);
    const ArmModel c = make_birth_death_arm(3.0, 5.0, 6, 0.1);
    const ArmModel d = make_birth_death_arm(3.0, 5.0, 6, 0.1);
    CHECK(c.transition == d.transition);
    CHECK(c.reward_mean == d.reward_mean);
}

TEST_CASE("step_arm: passive actions never pay") {
    Rng rng(11);
    const ArmModel arm = make_birth_death_arm(3.0, 5.0, 6, 0.1);
    for (int i = 0; i < 100; ++i) {
        CHECK(step_arm(arm, static_cast<int>(rng() % 6), 0, rng).reward == 0.0);
    }
}

TEST_CASE("step_arm: deterministic kernel row always lands on its target") {
    ArmModel arm = make_rte_arm(1.0);
    Rng rng(13);
    for (int i = 0; i < 50; ++i) {
        CHECK(step_arm(arm, 0, 1, rng).next_state == 1);
    }
}

TEST_CASE("step_arm: Bernoulli rewards hit their mean within Monte-Carlo bounds") {
    ArmModel arm = make_birth_death_arm(1.0, 1.0, 6, 0.1);  // mean 0.5 at s=5
    Rng rng(17);
    const int kSamples = 100000;
    double total = 0.0;
    for (int i = 0; i < kSamples; ++i) total += step_arm(arm, 5, 1, rng).reward;
    CHECK(std::abs(total / kSamples - 0.5) <= 0.01);
}

TEST_CASE("step_arm with a fixed seed is reproducible") {
    const ArmModel arm = make_birth_death_arm(3.0, 5.0, 6, 0.1);
    Rng rng_a(21), rng_b(21);
    for (int i = 0; i < 200; ++i) {
        const StepOutcome a = step_arm(arm, i % 6, i % 2, rng_a);
        const StepOutcome b = step_arm(arm, i % 6, i % 2, rng_b);
        CHECK(a.next_state == b.next_state);
        CHECK(a.reward == b.reward);
    }
}

TEST_CASE("make_arm dispatches every spec variant") {
    CHECK(make_arm(BirthDeathSpec{3.0, 5.0, 6, 0.1}).num_states == 6);
    CHECK(make_arm(CpapSpec{2, 0.1, 0.0, 9}).num_states == 3);
    CHECK(make_arm(RteSpec{0.4}).num_states == 2);
    CHECK(make_arm(LmssSpec{60}).num_states == 2);
}
