#include <doctest.h>

#include <cmath>

#include "erl/envs.hpp"
#include "erl/shaping.hpp"
#include "support.hpp"

using namespace erl;
using erl::testing::tight_solve;

namespace {

SoftSolution solve_tight(const Task& task) { return solve(task, tight_solve()); }

Potential random_potential(Rng& rng, int ns, double scale = 1.0) {
    return Potential{random_state_values(rng, ns, -scale, scale)};
}

}  // namespace

TEST_CASE("shape") {
    SUBCASE("zero potential is the identity") {
        Rng rng(61);
        Task task = random_task(rng, 4, 2, 0.9, 2.0);
        ShapedTask shaped = shape(task, Potential(4, 0.0));
        CHECK(shaped.task.reward.values == task.reward.values);
    }

    SUBCASE("constant potential shifts reward by (gamma-1)c and Q by -c") {
        Rng rng(62);
        Task task = random_task(rng, 4, 3, 0.9, 2.0);
        const double c = 0.8;
        ShapedTask shaped = shape(task, Potential(4, c));
        for (int s = 0; s < 4; ++s)
            for (int a = 0; a < 3; ++a)
                for (int sp = 0; sp < 4; ++sp)
                    CHECK(shaped.task.reward.values(s, a, sp) ==
                          doctest::Approx(task.reward.values(s, a, sp) + (task.gamma - 1) * c)
                              .epsilon(1e-14));

        SoftSolution base = solve_tight(task);
        SoftSolution tilt = solve_tight(shaped.task);
        for (int s = 0; s < 4; ++s)
            for (int a = 0; a < 3; ++a)
                CHECK(tilt.q(s, a) == doctest::Approx(base.q(s, a) - c).epsilon(1e-9));
        CHECK(max_abs_diff(tilt.policy.probs, base.policy.probs) <= 1e-9);
    }

    SUBCASE("random potentials keep the policy and offset the solution") {
        Rng rng(63);
        for (int rep = 0; rep < 5; ++rep) {
            Task task = random_task(rng, 6, 3, 0.9, 2.0, true);
            Potential phi = random_potential(rng, 6);
            ShapedTask shaped = shape(task, phi);
            SoftSolution base = solve_tight(task);
            SoftSolution tilt = solve_tight(shaped.task);
            CHECK(max_abs_diff(tilt.policy.probs, base.policy.probs) <= 1e-8);
            for (int s = 0; s < 6; ++s) {
                CHECK(std::abs(tilt.v[s] + phi.phi[s] - base.v[s]) <= 1e-8);
                for (int a = 0; a < 3; ++a)
                    CHECK(std::abs(tilt.q(s, a) + phi.phi[s] - base.q(s, a)) <= 1e-8);
            }
        }
    }

    SUBCASE("non-finite potential is rejected") {
        Rng rng(64);
        Task task = random_task(rng, 3, 2, 0.9, 1.0);
        Potential bad(3, 0.0);
        bad.phi[1] = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(shape(task, bad), std::invalid_argument);
    }

    SUBCASE("shaping with the negated potential inverts the reward exactly") {
        Rng rng(65);
        Task task = random_task(rng, 5, 2, 0.95, 2.0);
        Potential phi = random_potential(rng, 5);
        ShapedTask shaped = shape(task, phi);
        Potential neg = phi;
        for (double& x : neg.phi) x = -x;
        ShapedTask undone = shape(shaped.task, neg);
        CHECK(max_abs_diff(undone.task.reward.values.row(0, 0),
                           task.reward.values.row(0, 0)) <= 1e-14);
        double m = 0.0;
        for (std::size_t i = 0; i < task.reward.values.size(); ++i)
            m = std::max(m, std::abs(undone.task.reward.values.data()[i] -
                                     task.reward.values.data()[i]));
        CHECK(m <= 1e-14);
    }
}

TEST_CASE("unshape_solution") {
    Rng rng(66);
    Task task = random_task(rng, 6, 3, 0.9, 2.0);
    Potential phi = random_potential(rng, 6);
    ShapedTask shaped = shape(task, phi);
    SoftSolution tilt = solve_tight(shaped.task);

    SUBCASE("zero potential is the identity") {
        SoftSolution same = unshape_solution(tilt, Potential(6, 0.0));
        CHECK(max_abs_diff(same.q, tilt.q) == 0.0);
    }

    SUBCASE("recovers the original task's solution") {
        SoftSolution recovered = unshape_solution(tilt, phi);
        SoftSolution base = solve_tight(task);
        CHECK(max_abs_diff(recovered.q, base.q) <= 1e-8);
        CHECK(max_abs_diff(std::span<const double>(recovered.v),
                           std::span<const double>(base.v)) <= 1e-8);
        CHECK(max_abs_diff(recovered.policy.probs, base.policy.probs) <= 1e-8);
    }
}

TEST_CASE("shaping holds for arbitrary policies, not just the optimum") {
    Rng rng(67);
    Task task = random_task(rng, 5, 3, 0.9, 2.0, true);
    Potential phi = random_potential(rng, 5);

    SUBCASE("optimal policy") {
        SoftSolution base = solve_tight(task);
        ShapedPolicyReport report =
            evaluate_shaped_policy_identity(task, phi, base.policy, tight_solve());
        CHECK(report.q_residual <= 1e-8);
        CHECK(report.v_residual <= 1e-8);
        CHECK(report.gap_residual <= 1e-8);
    }

    SUBCASE("random policies") {
        for (int rep = 0; rep < 10; ++rep) {
            PolicyTable pi = random_policy(rng, 5, 3);
            ShapedPolicyReport report =
                evaluate_shaped_policy_identity(task, phi, pi, tight_solve());
            CHECK(report.q_residual <= 1e-8);
            CHECK(report.v_residual <= 1e-8);
            CHECK(report.gap_residual <= 1e-8);
        }
    }

    SUBCASE("epsilon-optimal policies transfer their gap") {
        ShapedTask shaped = shape(task, phi);
        SoftSolution tilt_star = solve_tight(shaped.task);
        SoftSolution base_star = solve_tight(task);

        // Early-stopped solve of the shaped task gives a near-optimal policy.
        SolveOptions loose;
        loose.tolerance = 2e-5;
        SoftSolution rough = solve(shaped.task, loose);
        PolicyEvaluation tilt_eval =
            soft_policy_evaluation(shaped.task, rough.policy, tight_solve());
        double eps_shaped = 0.0;
        for (int s = 0; s < 5; ++s)
            eps_shaped = std::max(eps_shaped, std::abs(tilt_eval.v[s] - tilt_star.v[s]));
        REQUIRE(eps_shaped <= 1e-3);

        PolicyEvaluation base_eval = soft_policy_evaluation(task, rough.policy, tight_solve());
        double eps_orig = 0.0;
        for (int s = 0; s < 5; ++s)
            eps_orig = std::max(eps_orig, std::abs(base_eval.v[s] - base_star.v[s]));
        CHECK(eps_orig <= 1e-3);
        CHECK(std::abs(eps_orig - eps_shaped) <= 1e-8);
    }
}

TEST_CASE("inverse reward") {
    SUBCASE("prior policy with zero value gives the zero reward") {
        Rng rng(68);
        Task task = random_task(rng, 4, 2, 0.9, 2.0);
        RewardTable r = inverse_reward(task.prior, Potential(4, 0.0), task.dynamics, task.gamma,
                                       task.beta, task.prior);
        Task zero{task.dynamics, r, task.gamma, task.beta, task.prior};
        CHECK(max_abs(expected_reward_table(zero)) <= 1e-14);
        SoftSolution sol = solve_tight(zero);
        CHECK(max_abs_diff(sol.policy.probs, task.prior.probs) <= 1e-10);
        for (double v : sol.v) CHECK(std::abs(v) <= 1e-10);
    }

    SUBCASE("constant value gives the constant reward c(1-gamma)") {
        Rng rng(69);
        Task task = random_task(rng, 3, 2, 0.9, 2.0);
        const double c = 1.7;
        RewardTable r = inverse_reward(task.prior, Potential(3, c), task.dynamics, task.gamma,
                                       task.beta, task.prior);
        for (int s = 0; s < 3; ++s)
            for (int a = 0; a < 2; ++a)
                for (int sp = 0; sp < 3; ++sp)
                    CHECK(r.values(s, a, sp) ==
                          doctest::Approx(c * (1 - task.gamma)).epsilon(1e-13));
        Task built{task.dynamics, r, task.gamma, task.beta, task.prior};
        SoftSolution sol = solve_tight(built);
        for (double v : sol.v) CHECK(v == doctest::Approx(c).epsilon(1e-9));
    }

    SUBCASE("round trip on random targets") {
        Rng rng(70);
        for (int rep = 0; rep < 5; ++rep) {
            Task env = random_task(rng, 6, 3, 0.9, 2.0, true);
            PolicyTable target = random_policy(rng, 6, 3);
            Potential value = random_potential(rng, 6);
            RewardTable r = inverse_reward(target, value, env.dynamics, env.gamma, env.beta,
                                           env.prior);
            Task built{env.dynamics, r, env.gamma, env.beta, env.prior};
            SoftSolution sol = solve_tight(built);
            CHECK(max_abs_diff(sol.policy.probs, target.probs) <= 1e-6);
            for (int s = 0; s < 6; ++s) CHECK(std::abs(sol.v[s] - value.phi[s]) <= 1e-6);
        }
    }

    SUBCASE("zero policy entries are rejected") {
        Rng rng(71);
        Task env = random_task(rng, 3, 2, 0.9, 2.0);
        PolicyTable bad{Table2(3, 2, 0.5)};
        bad.probs(1, 0) = 0.0;
        bad.probs(1, 1) = 1.0;
        CHECK_THROWS_AS(
            inverse_reward(bad, Potential(3, 0.0), env.dynamics, env.gamma, env.beta, env.prior),
            std::invalid_argument);
    }
}

TEST_CASE("identifiability residual") {
    Rng rng(72);
    TabularDynamics p = random_dynamics(rng, 5, 2);
    TabularDynamics q = random_dynamics(rng, 5, 2);

    SUBCASE("trivial zero pair") {
        Table2 res = identifiability_residual(p, 0.9, Potential(5, 0.0), q, 0.8,
                                              Potential(5, 0.0));
        CHECK(max_abs(res) == 0.0);
    }

    SUBCASE("identical environments and potentials cancel") {
        Potential phi{random_state_values(rng, 5, -1.0, 1.0)};
        Table2 res = identifiability_residual(p, 0.9, phi, p, 0.9, phi);
        CHECK(max_abs(res) <= 1e-15);
    }

    SUBCASE("zero psi leaves the p-side shaping term") {
        Potential phi{random_state_values(rng, 5, -1.0, 1.0)};
        const double gamma = 0.9, gamma_tilde = 0.7;
        Table2 res = identifiability_residual(p, gamma, phi, q, gamma_tilde, Potential(5, 0.0));
        for (int s = 0; s < 5; ++s)
            for (int a = 0; a < 2; ++a) {
                double expect = -phi.phi[s];
                for (int sp = 0; sp < 5; ++sp)
                    expect += gamma * p.transition(s, a, sp) * phi.phi[sp];
                CHECK(res(s, a) == doctest::Approx(expect).epsilon(1e-13));
            }
    }

    SUBCASE("literal reading swaps the expectation") {
        Potential phi{random_state_values(rng, 5, -1.0, 1.0)};
        Table2 res = identifiability_residual(p, 0.9, phi, q, 0.7, Potential(5, 0.0), true);
        for (int s = 0; s < 5; ++s)
            for (int a = 0; a < 2; ++a) {
                double ep = 0.0;
                for (int sp = 0; sp < 5; ++sp) ep += p.transition(s, a, sp) * phi.phi[sp];
                CHECK(res(s, a) == doctest::Approx(0.9 * phi.phi[s] - ep).epsilon(1e-13));
            }
    }
}
