#pragma once

#include <vector>

#include "erl/solver.hpp"
#include "erl/task.hpp"

namespace erl {

/// Bounded state function used as a shaping potential.
struct Potential {
    std::vector<double> phi;

    Potential() = default;
    explicit Potential(std::vector<double> values) : phi(std::move(values)) {}
    Potential(int num_states, double fill) : phi(static_cast<std::size_t>(num_states), fill) {}
};

/// A task with reward r + gamma phi(s') - phi(s), together with its source.
struct ShapedTask {
    Task task;
    Potential potential;
    Task original;
};

/// Adds the potential-based term to every reward entry. The shaped task's
/// soft-optimal policy equals the original's, with Q and V offset by -phi.
ShapedTask shape(const Task& task, const Potential& potential);

/// Maps a shaped task's solution back to the original task: adds phi to every
/// Q entry (broadcast over actions) and to V; the policy carries over.
SoftSolution unshape_solution(const SoftSolution& shaped_solution, const Potential& potential);

struct ShapedPolicyReport {
    double q_residual = 0.0;    // max |Q_shaped^pi - (Q^pi - phi)|
    double v_residual = 0.0;    // max |V_shaped^pi - (V^pi - phi)|
    double gap_residual = 0.0;  // max |(V_shaped^pi - V_shaped^*) - (V^pi - V^*)|
};

/// Evaluates an arbitrary policy in both the original and the shaped task and
/// reports how far the offset and optimality-gap identities are from exact.
ShapedPolicyReport evaluate_shaped_policy_identity(const Task& task, const Potential& potential,
                                                   const PolicyTable& policy,
                                                   const SolveOptions& options = {});

/// Reward for which the given policy and state values are soft-optimal in the
/// given environment:
///   R(s,a,s') = (1/beta) log(policy/prior) + v(s) - gamma v(s').
RewardTable inverse_reward(const PolicyTable& target_policy, const Potential& target_value,
                           const TabularDynamics& dynamics, double gamma, double beta,
                           const PolicyTable& prior);

/// residual(s,a) between the two environments' potential-based reward terms.
/// Zero everywhere for a non-constant pair means the pair defeats reward
/// identifiability across the environments. The literal flag swaps in the
/// alternative reading gamma phi(s) - E phi(s') for each side.
Table2 identifiability_residual(const TabularDynamics& p, double gamma, const Potential& phi,
                                const TabularDynamics& q, double gamma_tilde, const Potential& psi,
                                bool literal_reading = false);

}  // namespace erl
