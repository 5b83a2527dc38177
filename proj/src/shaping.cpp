#include "erl/shaping.hpp"

#include <cmath>
#include <stdexcept>

namespace erl {

namespace {

void require_potential(const Potential& potential, int num_states, const char* where) {
    if (static_cast<int>(potential.phi.size()) != num_states)
        throw std::invalid_argument(std::string(where) + ": potential length mismatch");
    for (double x : potential.phi)
        if (!std::isfinite(x))
            throw std::invalid_argument(std::string(where) + ": potential not finite");
}

}  // namespace

ShapedTask shape(const Task& task, const Potential& potential) {
    require_potential(potential, task.num_states(), "shape");

    ShapedTask out;
    out.original = task;
    out.potential = potential;
    out.task = task;
    for (int s = 0; s < task.num_states(); ++s)
        for (int a = 0; a < task.num_actions(); ++a) {
            auto row = out.task.reward.values.row(s, a);
            for (int sp = 0; sp < task.num_states(); ++sp)
                row[sp] += task.gamma * potential.phi[sp] - potential.phi[s];
        }
    return out;
}

SoftSolution unshape_solution(const SoftSolution& shaped_solution, const Potential& potential) {
    require_potential(potential, shaped_solution.q.rows(), "unshape_solution");

    SoftSolution out = shaped_solution;
    for (int s = 0; s < out.q.rows(); ++s) {
        for (int a = 0; a < out.q.cols(); ++a) out.q(s, a) += potential.phi[s];
        out.v[s] += potential.phi[s];
    }
    return out;
}

ShapedPolicyReport evaluate_shaped_policy_identity(const Task& task, const Potential& potential,
                                                   const PolicyTable& policy,
                                                   const SolveOptions& options) {
    ShapedTask shaped = shape(task, potential);

    PolicyEvaluation orig = soft_policy_evaluation(task, policy, options);
    PolicyEvaluation tilt = soft_policy_evaluation(shaped.task, policy, options);

    ShapedPolicyReport report;
    for (int s = 0; s < task.num_states(); ++s) {
        for (int a = 0; a < task.num_actions(); ++a)
            report.q_residual =
                std::max(report.q_residual,
                         std::abs(tilt.q(s, a) - (orig.q(s, a) - potential.phi[s])));
        report.v_residual = std::max(
            report.v_residual, std::abs(tilt.v[s] - (orig.v[s] - potential.phi[s])));
    }

    SoftSolution orig_star = solve(task, options);
    SoftSolution tilt_star = solve(shaped.task, options);
    for (int s = 0; s < task.num_states(); ++s) {
        double shaped_gap = tilt.v[s] - tilt_star.v[s];
        double orig_gap = orig.v[s] - orig_star.v[s];
        report.gap_residual = std::max(report.gap_residual, std::abs(shaped_gap - orig_gap));
    }
    return report;
}

RewardTable inverse_reward(const PolicyTable& target_policy, const Potential& target_value,
                           const TabularDynamics& dynamics, double gamma, double beta,
                           const PolicyTable& prior) {
    const int ns = dynamics.num_states;
    const int na = dynamics.num_actions;
    if (target_policy.num_states() != ns || target_policy.num_actions() != na ||
        prior.num_states() != ns || prior.num_actions() != na)
        throw std::invalid_argument("inverse_reward: policy shape mismatch");
    require_potential(target_value, ns, "inverse_reward");
    for (int s = 0; s < ns; ++s)
        for (int a = 0; a < na; ++a)
            if (!(target_policy.probs(s, a) > 0.0))
                throw std::invalid_argument("inverse_reward: target policy has a zero entry");

    RewardTable out(ns, na);
    for (int s = 0; s < ns; ++s)
        for (int a = 0; a < na; ++a) {
            double base = std::log(target_policy.probs(s, a) / prior.probs(s, a)) / beta +
                          target_value.phi[s];
            auto row = out.values.row(s, a);
            for (int sp = 0; sp < ns; ++sp) row[sp] = base - gamma * target_value.phi[sp];
        }
    return out;
}

Table2 identifiability_residual(const TabularDynamics& p, double gamma, const Potential& phi,
                                const TabularDynamics& q, double gamma_tilde, const Potential& psi,
                                bool literal_reading) {
    if (!p.same_shape(q))
        throw std::invalid_argument("identifiability_residual: dynamics shape mismatch");
    require_potential(phi, p.num_states, "identifiability_residual");
    require_potential(psi, q.num_states, "identifiability_residual");

    const int ns = p.num_states;
    const int na = p.num_actions;
    Table2 out(ns, na);
    for (int s = 0; s < ns; ++s)
        for (int a = 0; a < na; ++a) {
            double ep = 0.0, eq = 0.0;
            auto prow = p.transition.row(s, a);
            auto qrow = q.transition.row(s, a);
            for (int sp = 0; sp < ns; ++sp) {
                ep += prow[sp] * phi.phi[sp];
                eq += qrow[sp] * psi.phi[sp];
            }
            double lhs, rhs;
            if (literal_reading) {
                lhs = gamma * phi.phi[s] - ep;
                rhs = gamma_tilde * psi.phi[s] - eq;
            } else {
                lhs = gamma * ep - phi.phi[s];
                rhs = gamma_tilde * eq - psi.phi[s];
            }
            out(s, a) = lhs - rhs;
        }
    return out;
}

}  // namespace erl
