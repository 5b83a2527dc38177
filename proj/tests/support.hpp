#pragma once

#include "erl/random.hpp"
#include "erl/solver.hpp"
#include "erl/task.hpp"

namespace erl::testing {

/// Single-state task with `num_actions` self-loop actions and the given
/// per-action rewards.
inline Task self_loop_task(std::vector<double> rewards, double gamma, double beta) {
    const int na = static_cast<int>(rewards.size());
    Task task;
    task.dynamics = TabularDynamics(1, na);
    task.reward = RewardTable(1, na);
    for (int a = 0; a < na; ++a) {
        task.dynamics.transition(0, a, 0) = 1.0;
        task.reward.values(0, a, 0) = rewards[a];
    }
    task.gamma = gamma;
    task.beta = beta;
    task.prior = uniform_prior(1, na);
    return task;
}

inline SolveOptions tight_solve() {
    SolveOptions opt;
    opt.tolerance = 1e-13;
    return opt;
}

}  // namespace erl::testing
