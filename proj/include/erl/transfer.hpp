#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "erl/random.hpp"
#include "erl/solver.hpp"
#include "erl/task.hpp"

namespace erl {

/// A claimed exact identity between two independently computed quantities
/// failed beyond its tolerance.
class IdentityViolation : public std::runtime_error {
public:
    IdentityViolation(std::string what, double residual_, double tolerance_)
        : std::runtime_error(std::move(what)), residual(residual_), tolerance(tolerance_) {}

    double residual;
    double tolerance;
};

enum class CorrectiveKind { reward_change, dynamics_change, composition };

/// A derived task whose optimal Q-function K* satisfies
///   Q*(target) = base_q + K*.
/// `task` holds the corrective reward and the designated prior policy;
/// `target` is the task the combined solution is for.
struct CorrectiveProblem {
    Task task;
    QTable base_q;
    CorrectiveKind kind = CorrectiveKind::reward_change;
    Task target;
};

/// Corrective problem for a reward change r -> new_reward on the task solved
/// by `solution`: corrective reward is the difference, prior is the solved
/// task's soft-optimal policy, and base_q is its optimal Q-table.
CorrectiveProblem reward_change_corrective(const SoftSolution& solution,
                                           const RewardTable& new_reward, const Task& base_task);

/// Turns a solved corrective problem into the target task's solution:
/// Q = base_q + k_star, with state values and policy re-derived under the
/// target's own prior. Verifies the additive value identity and the policy
/// equality, and that k_star actually solves the corrective task.
SoftSolution combine(const CorrectiveProblem& corrective, const QTable& k_star,
                     double residual_tolerance = 1e-8);

/// Reward adjustment absorbing a prior change pi0 -> pi1. Returns the adjusted
/// task (reward r + shift, prior pi1) and the closed-form Q shift
/// shift(s,a) = (1/beta) log(pi0(a|s)/pi1(a|s)).
std::pair<Task, Table2> prior_change(const Task& task, const PolicyTable& new_prior);

/// Corrective problem for a dynamics change p -> q with the reward kept.
/// Rewards depending on s' are first reduced to their expectation under p
/// (exact for the solved task), so the target carries that reduced reward.
CorrectiveProblem dynamics_change_corrective(const SoftSolution& solution,
                                             const TabularDynamics& new_dynamics,
                                             const Task& base_task);

/// The reward under dynamics q for which the solved Q-table stays optimal:
/// r_bar(s,a) = E_p[r] - gamma (E_q - E_p) V*.
RewardTable free_solution_reward(const SoftSolution& solution, const TabularDynamics& new_dynamics,
                                 const Task& base_task);

/// Pointwise composition function applied to per-task reward (or Q) vectors.
struct CompositionFn {
    enum class Kind { min, max, weighted_sum, product, custom };

    Kind kind = Kind::min;
    std::vector<double> weights;  // weighted_sum only
    std::function<double(std::span<const double>)> custom_fn;

    double operator()(std::span<const double> x) const;
    std::string name() const;
};

/// Reward-varying member tasks plus the composition function.
struct CompositionSpec {
    std::vector<Task> member_tasks;
    CompositionFn f;
};

/// The transformed solution f({Q*}) with its induced value and policy, used
/// as the corrective problem's prior.
struct CompositionPrior {
    std::vector<double> v_f;
    PolicyTable pi_f;
    QTable f_of_q;
};

/// Builds the composed task's corrective problem from the member solutions:
/// corrective reward kappa(s,a,s') = f({r(s,a,s')}) + gamma v_f(s') - f({Q*(s,a)}),
/// prior pi_f, base_q = f({Q*}).
std::pair<CompositionPrior, CorrectiveProblem> compose(
    const CompositionSpec& spec, const std::vector<SoftSolution>& member_solutions);

struct Transition {
    int state = 0;
    int action = 0;
    double reward = 0.0;
    int next_state = 0;
};

/// Recorded (s, a, r, s') tuples for offline corrective-value learning.
struct TransitionBatch {
    std::vector<Transition> records;

    /// Rewrites every record's reward from the given (s,a,s') table.
    void relabel(const RewardTable& reward);

    /// True when every (s,a) pair appears at least once.
    bool covers(int num_states, int num_actions) const;
};

/// One record per (s,a): follows the task's single successor. Requires a
/// deterministic kernel.
TransitionBatch exhaustive_batch(const Task& task);

/// Uniform (s,a) draws with successors sampled from the kernel.
TransitionBatch sample_batch(const Task& task, Rng& rng, long count);

enum class OfflineMode { exact_replay, stochastic };

/// alpha_k = alpha0 / (1 + k / tau), counting from start_step.
struct StochasticSchedule {
    double alpha0 = 0.5;
    double tau = 1000.0;
    long start_step = 0;
};

/// One offline update of the corrective value table from batch data, using
/// the stored base_q and the target task's prior (no optimal policy needed).
/// exact_replay performs a full empirical backup from the batch's transition
/// frequencies; stochastic applies per-record soft Q-learning steps.
QTable offline_k_update(const QTable& k, const TransitionBatch& batch,
                        const CorrectiveProblem& corrective, OfflineMode mode,
                        const StochasticSchedule& schedule = {});

}  // namespace erl
