#include "erl/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace erl {

PolicyTable extract_policy(const QTable& q, const PolicyTable& prior, double beta) {
    const int ns = q.rows();
    const int na = q.cols();
    if (prior.num_states() != ns || prior.num_actions() != na)
        throw std::invalid_argument("extract_policy: prior shape mismatch");
    PolicyTable out{Table2(ns, na)};
    for (int s = 0; s < ns; ++s) {
        double m = q(s, 0);
        for (int a = 1; a < na; ++a) m = std::max(m, q(s, a));
        double sum = 0.0;
        for (int a = 0; a < na; ++a) {
            double w = prior.probs(s, a) * std::exp(beta * (q(s, a) - m));
            out.probs(s, a) = w;
            sum += w;
        }
        if (!(sum > 0.0) || !std::isfinite(sum)) throw NumericError(s, -1);
        for (int a = 0; a < na; ++a) out.probs(s, a) /= sum;
    }
    return out;
}

std::vector<double> extract_value(const QTable& q, const PolicyTable& prior, double beta) {
    if (prior.num_states() != q.rows() || prior.num_actions() != q.cols())
        throw std::invalid_argument("extract_value: prior shape mismatch");
    std::vector<double> v(q.rows());
    log_partition(q, prior, beta, v);
    for (int s = 0; s < q.rows(); ++s)
        if (!std::isfinite(v[s])) throw NumericError(s, -1);
    return v;
}

QTable soft_backup(const QTable& q, const Task& task, Execution exec) {
    if (q.rows() != task.num_states() || q.cols() != task.num_actions())
        throw std::invalid_argument("soft_backup: q shape mismatch");
    std::vector<double> w(task.num_states());
    log_partition(q, task.prior, task.beta, w);
    QTable out(task.num_states(), task.num_actions());
    backup_from_values(task, w, out, exec);
    return out;
}

double bellman_error(const QTable& q_prev, const QTable& q_next) {
    return max_abs_diff(q_prev, q_next);
}

namespace {

QTable initial_q(const Task& task, const SolveOptions& options) {
    if (!options.q0) return QTable(task.num_states(), task.num_actions(), 0.0);
    const QTable& q0 = *options.q0;
    if (q0.rows() != task.num_states() || q0.cols() != task.num_actions())
        throw std::invalid_argument("solve: q0 shape mismatch");
    for (std::size_t i = 0; i < q0.size(); ++i)
        if (!std::isfinite(q0.data()[i])) throw std::invalid_argument("solve: q0 not finite");
    return q0;
}

template <typename Sweep>
ConvergenceTrace iterate(QTable& q, const SolveOptions& options, Sweep&& sweep) {
    if (!(options.tolerance > 0.0))
        throw std::invalid_argument("solve: tolerance must be positive");
    ConvergenceTrace trace;
    trace.tolerance = options.tolerance;
    QTable next(q.rows(), q.cols());
    std::vector<double> values(q.rows());
    for (long k = 0; k < options.max_iter; ++k) {
        sweep(q, values, next);
        double err = max_abs_diff(q, next);
        trace.errors.push_back(err);
        std::swap(q, next);
        if (err <= options.tolerance) {
            trace.converged = true;
            break;
        }
    }
    trace.iterations = static_cast<long>(trace.errors.size());
    return trace;
}

}  // namespace

SoftSolution solve(const Task& task, const SolveOptions& options) {
    require_valid(task);
    QTable q = initial_q(task, options);
    ConvergenceTrace trace =
        iterate(q, options, [&](const QTable& cur, std::vector<double>& values, QTable& next) {
            log_partition(cur, task.prior, task.beta, values);
            backup_from_values(task, values, next, options.exec);
        });

    SoftSolution sol;
    sol.q = std::move(q);
    sol.v = extract_value(sol.q, task.prior, task.beta);
    sol.policy = extract_policy(sol.q, task.prior, task.beta);
    sol.trace = std::move(trace);
    return sol;
}

PolicyEvaluation soft_policy_evaluation(const Task& task, const PolicyTable& policy,
                                        const SolveOptions& options) {
    require_valid(task);
    if (policy.num_states() != task.num_states() || policy.num_actions() != task.num_actions())
        throw std::invalid_argument("soft_policy_evaluation: policy shape mismatch");
    for (int s = 0; s < policy.num_states(); ++s) {
        double sum = 0.0;
        for (int a = 0; a < policy.num_actions(); ++a) {
            double p = policy.probs(s, a);
            if (!(p >= 0.0) || !std::isfinite(p))
                throw std::invalid_argument("soft_policy_evaluation: bad policy entry");
            sum += p;
        }
        if (!(std::abs(sum - 1.0) <= kRowSumTol))
            throw std::invalid_argument("soft_policy_evaluation: policy row does not sum to 1");
    }

    QTable q = initial_q(task, options);
    ConvergenceTrace trace =
        iterate(q, options, [&](const QTable& cur, std::vector<double>& values, QTable& next) {
            policy_value(cur, policy, task.prior, task.beta, values);
            backup_from_values(task, values, next, options.exec);
        });

    PolicyEvaluation eval;
    eval.q = std::move(q);
    eval.v.resize(task.num_states());
    policy_value(eval.q, policy, task.prior, task.beta, eval.v);
    eval.trace = std::move(trace);
    return eval;
}

}  // namespace erl
