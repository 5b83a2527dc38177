#include <doctest.h>

#include <cmath>

#include "erl/random.hpp"
#include "erl/task.hpp"
#include "support.hpp"

using namespace erl;

TEST_CASE("uniform_prior fills rows evenly") {
    PolicyTable p = uniform_prior(1, 2);
    CHECK(p.probs(0, 0) == 0.5);
    CHECK(p.probs(0, 1) == 0.5);

    PolicyTable q = uniform_prior(2, 4);
    for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 4; ++a) CHECK(q.probs(s, a) == 0.25);

    PolicyTable single = uniform_prior(3, 1);
    for (int s = 0; s < 3; ++s) CHECK(single.probs(s, 0) == 1.0);

    CHECK_THROWS_AS(uniform_prior(0, 2), std::invalid_argument);
    CHECK_THROWS_AS(uniform_prior(2, 0), std::invalid_argument);
}

TEST_CASE("expected_reward") {
    SUBCASE("deterministic self-loop") {
        Task task = testing::self_loop_task({1.0}, 0.5, 1.0);
        CHECK(expected_reward(task, 0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    }

    SUBCASE("even split over two rewards") {
        Task task;
        task.dynamics = TabularDynamics(2, 1);
        task.reward = RewardTable(2, 1);
        task.dynamics.transition(0, 0, 0) = 0.5;
        task.dynamics.transition(0, 0, 1) = 0.5;
        task.dynamics.transition(1, 0, 1) = 1.0;
        task.reward.values(0, 0, 0) = 2.0;
        task.reward.values(0, 0, 1) = 0.0;
        task.gamma = 0.9;
        task.beta = 1.0;
        task.prior = uniform_prior(2, 1);
        CHECK(expected_reward(task, 0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    }

    SUBCASE("matches direct summation on a random task") {
        Rng rng(7);
        Task task = random_task(rng, 5, 3, 0.9, 2.0);
        for (int s = 0; s < 5; ++s)
            for (int a = 0; a < 3; ++a) {
                double oracle = 0.0;
                for (int sp = 0; sp < 5; ++sp)
                    oracle += task.dynamics.transition(s, a, sp) * task.reward.values(s, a, sp);
                CHECK(expected_reward(task, s, a) == doctest::Approx(oracle).epsilon(1e-14));
            }
    }

    SUBCASE("linearity in the reward table") {
        Rng rng(8);
        Task t1 = random_task(rng, 4, 2, 0.9, 1.0);
        Task t2 = t1;
        t2.reward = random_reward(rng, 4, 2);
        const double c = 2.75;
        Task combined = t1;
        for (std::size_t i = 0; i < combined.reward.values.size(); ++i)
            combined.reward.values.data()[i] =
                t1.reward.values.data()[i] + c * t2.reward.values.data()[i];
        for (int s = 0; s < 4; ++s)
            for (int a = 0; a < 2; ++a)
                CHECK(expected_reward(combined, s, a) ==
                      doctest::Approx(expected_reward(t1, s, a) + c * expected_reward(t2, s, a))
                          .epsilon(1e-12));
    }

    SUBCASE("index out of range") {
        Task task = testing::self_loop_task({1.0}, 0.5, 1.0);
        CHECK_THROWS_AS(expected_reward(task, 1, 0), std::out_of_range);
        CHECK_THROWS_AS(expected_reward(task, 0, 1), std::out_of_range);
    }
}

TEST_CASE("validate_task") {
    SUBCASE("well-formed task passes") {
        Rng rng(3);
        Task task = random_task(rng, 2, 2, 0.9, 1.0);
        CHECK(validate_task(task).ok());
    }

    SUBCASE("row sum deficit is reported with location and magnitude") {
        Rng rng(3);
        Task task = random_task(rng, 3, 2, 0.9, 1.0);
        for (int sp = 0; sp < 3; ++sp) task.dynamics.transition(1, 0, sp) *= 0.9;
        ValidationReport report = validate_task(task);
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].rule == "transition_row_sum");
        CHECK(report.violations[0].state == 1);
        CHECK(report.violations[0].action == 0);
        CHECK(report.violations[0].magnitude == doctest::Approx(-0.1).epsilon(1e-9));
    }

    SUBCASE("zero prior probability is a positivity violation") {
        Rng rng(4);
        Task task = random_task(rng, 2, 2, 0.9, 1.0);
        task.prior.probs(0, 0) = 0.0;
        task.prior.probs(0, 1) = 1.0;
        ValidationReport report = validate_task(task);
        REQUIRE(!report.ok());
        CHECK(report.violations[0].rule == "prior_not_positive");
        CHECK(report.violations[0].state == 0);
        CHECK(report.violations[0].action == 0);
    }

    SUBCASE("gamma and beta ranges") {
        Rng rng(5);
        Task task = random_task(rng, 2, 2, 1.0, 1.0);
        CHECK(!validate_task(task).ok());
        task.gamma = 0.9;
        task.beta = 0.0;
        CHECK(!validate_task(task).ok());
    }
}

TEST_CASE("normalize_rows fixes tolerance-level drift only") {
    TabularDynamics dyn(1, 2);
    dyn.transition(0, 0, 0) = 1.0 + 5e-13;
    dyn.transition(0, 1, 0) = 0.9;  // far off, left alone
    dyn.normalize_rows();
    CHECK(dyn.transition(0, 0, 0) == 1.0);
    CHECK(dyn.transition(0, 1, 0) == 0.9);
}

TEST_CASE("reward broadcast copies (s,a) values over successors") {
    Table2 sa(2, 2);
    sa(0, 0) = 1.0;
    sa(0, 1) = 2.0;
    sa(1, 0) = -1.0;
    sa(1, 1) = 0.5;
    RewardTable r = RewardTable::broadcast(sa);
    for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a)
            for (int sp = 0; sp < 2; ++sp) CHECK(r.values(s, a, sp) == sa(s, a));
}
