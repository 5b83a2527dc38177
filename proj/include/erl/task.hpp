#pragma once

#include <string>
#include <vector>

#include "erl/tables.hpp"

namespace erl {

/// Tolerance for stochastic rows (transition and policy tables).
inline constexpr double kRowSumTol = 1e-12;

/// Transition kernel p(s'|s,a) stored as a dense (s, a, s') table.
struct TabularDynamics {
    int num_states = 0;
    int num_actions = 0;
    Table3 transition;  // (s, a, s')

    TabularDynamics() = default;
    TabularDynamics(int states, int actions)
        : num_states(states), num_actions(actions), transition(states, actions, states) {}

    /// Rescales every row whose sum is within `tol` of 1 so that it sums to 1
    /// exactly up to rounding. Rows further off are left for validation to flag.
    void normalize_rows(double tol = kRowSumTol);

    bool same_shape(const TabularDynamics& o) const {
        return num_states == o.num_states && num_actions == o.num_actions;
    }
};

/// Reward r(s,a,s'). Rewards given on (s,a) only are broadcast over s'.
struct RewardTable {
    Table3 values;  // (s, a, s')

    RewardTable() = default;
    explicit RewardTable(Table3 t) : values(std::move(t)) {}
    RewardTable(int states, int actions, double fill = 0.0)
        : values(states, actions, states, fill) {}

    static RewardTable broadcast(const Table2& state_action);
};

/// Action distribution per state. Strictly positive rows when used as a prior.
struct PolicyTable {
    Table2 probs;  // (s, a)

    PolicyTable() = default;
    explicit PolicyTable(Table2 t) : probs(std::move(t)) {}

    int num_states() const { return probs.rows(); }
    int num_actions() const { return probs.cols(); }
};

/// An entropy-regularized task: dynamics, reward, discount, inverse
/// temperature and the prior policy the KL penalty is measured against.
struct Task {
    TabularDynamics dynamics;
    RewardTable reward;
    double gamma = 0.0;
    double beta = 0.0;
    PolicyTable prior;

    int num_states() const { return dynamics.num_states; }
    int num_actions() const { return dynamics.num_actions; }
};

struct Violation {
    std::string rule;  // e.g. "transition_row_sum"
    int state = -1;
    int action = -1;
    double magnitude = 0.0;

    std::string describe() const;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string describe() const;
};

/// Checks every task invariant and reports each breach with its location and
/// magnitude. Never throws; an empty report means the task is well formed.
ValidationReport validate_task(const Task& task);

/// Throws std::invalid_argument with the first violation if the task is invalid.
void require_valid(const Task& task);

PolicyTable uniform_prior(int num_states, int num_actions);

/// E_{s'~p(.|s,a)} r(s,a,s').
double expected_reward(const Task& task, int s, int a);

/// (s,a) table of E_{s'~p} r(s,a,s') for the whole task.
Table2 expected_reward_table(const Task& task);

}  // namespace erl
