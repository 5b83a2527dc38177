#pragma once

#include <optional>
#include <vector>

#include "erl/kernels.hpp"
#include "erl/tables.hpp"
#include "erl/task.hpp"

namespace erl {

/// Action-value table Q(s,a).
using QTable = Table2;

/// Per-sweep sup-norm differences of a fixed-point iteration.
struct ConvergenceTrace {
    std::vector<double> errors;  // errors[k] = sup|Q^(k+1) - Q^(k)|
    long iterations = 0;         // == errors.size()
    bool converged = false;
    double tolerance = 0.0;
};

struct SoftSolution {
    QTable q;
    std::vector<double> v;  // per state
    PolicyTable policy;
    ConvergenceTrace trace;
};

struct SolveOptions {
    double tolerance = 1e-10;
    long max_iter = 100000;
    Execution exec = Execution::parallel;
    std::optional<QTable> q0;  // all-zeros when absent
};

/// Soft-optimal policy: rows proportional to prior(a|s) exp(beta q(s,a)).
PolicyTable extract_policy(const QTable& q, const PolicyTable& prior, double beta);

/// Log-partition state value: v(s) = (1/beta) log sum_a prior(a|s) exp(beta q(s,a)).
std::vector<double> extract_value(const QTable& q, const PolicyTable& prior, double beta);

/// One application of the soft Bellman operator. Pure; the input is untouched.
QTable soft_backup(const QTable& q, const Task& task, Execution exec = Execution::parallel);

/// Sup-norm distance between two same-shape Q tables.
double bellman_error(const QTable& q_prev, const QTable& q_next);

/// Iterates soft_backup from q0 (default zeros) until the successive sup-norm
/// difference drops to the tolerance or max_iter sweeps have run, then fills
/// in the state values, the soft-optimal policy and the trace.
SoftSolution solve(const Task& task, const SolveOptions& options = {});

struct PolicyEvaluation {
    QTable q;
    std::vector<double> v;  // V^pi(s), the KL-regularized return from s
    ConvergenceTrace trace;
};

/// Fixed point of the soft policy-evaluation operator for a fixed policy.
PolicyEvaluation soft_policy_evaluation(const Task& task, const PolicyTable& policy,
                                        const SolveOptions& options = {});

}  // namespace erl
