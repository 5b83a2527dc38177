#include "erl/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace erl {

namespace {

constexpr double kIdentityTol = 1e-8;

void require_solution_for(const SoftSolution& solution, const Task& task, const char* where) {
    if (solution.q.rows() != task.num_states() || solution.q.cols() != task.num_actions())
        throw std::invalid_argument(std::string(where) + ": solution shape mismatch");
    if (!solution.trace.converged)
        throw std::invalid_argument(std::string(where) + ": base task solution not converged");
}

std::vector<double> expected_values(const TabularDynamics& dyn, std::span<const double> v,
                                    int s_first, int s_last_excl) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(s_last_excl - s_first) * dyn.num_actions);
    for (int s = s_first; s < s_last_excl; ++s)
        for (int a = 0; a < dyn.num_actions; ++a) {
            auto p = dyn.transition.row(s, a);
            double acc = 0.0;
            for (int sp = 0; sp < dyn.num_states; ++sp) acc += p[sp] * v[sp];
            out.push_back(acc);
        }
    return out;
}

}  // namespace

CorrectiveProblem reward_change_corrective(const SoftSolution& solution,
                                           const RewardTable& new_reward, const Task& base_task) {
    require_solution_for(solution, base_task, "reward_change_corrective");
    if (!new_reward.values.same_shape(base_task.reward.values))
        throw std::invalid_argument("reward_change_corrective: reward shape mismatch");

    CorrectiveProblem cp;
    cp.kind = CorrectiveKind::reward_change;
    cp.base_q = solution.q;

    Task corrective = base_task;
    for (std::size_t i = 0; i < corrective.reward.values.size(); ++i)
        corrective.reward.values.data()[i] =
            new_reward.values.data()[i] - base_task.reward.values.data()[i];
    corrective.prior = solution.policy;
    cp.task = std::move(corrective);

    cp.target = base_task;
    cp.target.reward = new_reward;
    return cp;
}

SoftSolution combine(const CorrectiveProblem& corrective, const QTable& k_star,
                     double residual_tolerance) {
    const Task& ctask = corrective.task;
    if (k_star.rows() != ctask.num_states() || k_star.cols() != ctask.num_actions())
        throw std::invalid_argument("combine: k_star shape mismatch");

    double residual = max_abs_diff(k_star, soft_backup(k_star, ctask));
    if (residual > residual_tolerance)
        throw IdentityViolation("combine: k_star does not solve the corrective task", residual,
                                residual_tolerance);

    const double beta = corrective.target.beta;
    const PolicyTable& original_prior = corrective.target.prior;

    SoftSolution out;
    out.q = corrective.base_q + k_star;
    out.v = extract_value(out.q, original_prior, beta);
    out.policy = extract_policy(out.q, original_prior, beta);
    out.trace.converged = true;
    out.trace.tolerance = residual_tolerance;

    // Additive value identity against the corrective pieces.
    std::vector<double> v_base = extract_value(corrective.base_q, original_prior, beta);
    std::vector<double> v_k = extract_value(k_star, ctask.prior, beta);
    double v_res = 0.0;
    for (int s = 0; s < ctask.num_states(); ++s)
        v_res = std::max(v_res, std::abs(out.v[s] - (v_base[s] + v_k[s])));
    if (v_res > kIdentityTol)
        throw IdentityViolation("combine: value identity violated", v_res, kIdentityTol);

    PolicyTable pi_k = extract_policy(k_star, ctask.prior, beta);
    double pi_res = max_abs_diff(out.policy.probs, pi_k.probs);
    if (pi_res > kIdentityTol)
        throw IdentityViolation("combine: policy identity violated", pi_res, kIdentityTol);

    return out;
}

std::pair<Task, Table2> prior_change(const Task& task, const PolicyTable& new_prior) {
    if (new_prior.num_states() != task.num_states() ||
        new_prior.num_actions() != task.num_actions())
        throw std::invalid_argument("prior_change: prior shape mismatch");
    for (int s = 0; s < new_prior.num_states(); ++s)
        for (int a = 0; a < new_prior.num_actions(); ++a)
            if (!(new_prior.probs(s, a) > 0.0))
                throw std::invalid_argument("prior_change: new prior must be strictly positive");

    Table2 shift(task.num_states(), task.num_actions());
    for (int s = 0; s < task.num_states(); ++s)
        for (int a = 0; a < task.num_actions(); ++a)
            shift(s, a) =
                std::log(task.prior.probs(s, a) / new_prior.probs(s, a)) / task.beta;

    Task adjusted = task;
    for (int s = 0; s < task.num_states(); ++s)
        for (int a = 0; a < task.num_actions(); ++a) {
            auto row = adjusted.reward.values.row(s, a);
            for (double& x : row) x += shift(s, a);
        }
    adjusted.prior = new_prior;
    return {std::move(adjusted), std::move(shift)};
}

CorrectiveProblem dynamics_change_corrective(const SoftSolution& solution,
                                             const TabularDynamics& new_dynamics,
                                             const Task& base_task) {
    require_solution_for(solution, base_task, "dynamics_change_corrective");
    if (!new_dynamics.same_shape(base_task.dynamics))
        throw std::invalid_argument("dynamics_change_corrective: dynamics shape mismatch");

    const int ns = base_task.num_states();
    const int na = base_task.num_actions();

    // Reduce any s'-dependent reward to its expectation under the old
    // dynamics; the solved Q-table is unchanged by this substitution.
    Table2 reduced_reward = expected_reward_table(base_task);

    std::vector<double> ev_new = expected_values(new_dynamics, solution.v, 0, ns);
    std::vector<double> ev_old = expected_values(base_task.dynamics, solution.v, 0, ns);

    Table2 kappa(ns, na);
    for (int s = 0; s < ns; ++s)
        for (int a = 0; a < na; ++a) {
            std::size_t i = static_cast<std::size_t>(s) * na + a;
            kappa(s, a) = base_task.gamma * (ev_new[i] - ev_old[i]);
        }

    CorrectiveProblem cp;
    cp.kind = CorrectiveKind::dynamics_change;
    cp.base_q = solution.q;

    cp.task = base_task;
    cp.task.dynamics = new_dynamics;
    cp.task.reward = RewardTable::broadcast(kappa);
    cp.task.prior = solution.policy;

    cp.target = base_task;
    cp.target.dynamics = new_dynamics;
    cp.target.reward = RewardTable::broadcast(reduced_reward);
    return cp;
}

RewardTable free_solution_reward(const SoftSolution& solution, const TabularDynamics& new_dynamics,
                                 const Task& base_task) {
    require_solution_for(solution, base_task, "free_solution_reward");
    if (!new_dynamics.same_shape(base_task.dynamics))
        throw std::invalid_argument("free_solution_reward: dynamics shape mismatch");

    const int ns = base_task.num_states();
    const int na = base_task.num_actions();
    Table2 reduced_reward = expected_reward_table(base_task);
    std::vector<double> ev_new = expected_values(new_dynamics, solution.v, 0, ns);
    std::vector<double> ev_old = expected_values(base_task.dynamics, solution.v, 0, ns);

    Table2 r_bar(ns, na);
    for (int s = 0; s < ns; ++s)
        for (int a = 0; a < na; ++a) {
            std::size_t i = static_cast<std::size_t>(s) * na + a;
            r_bar(s, a) = reduced_reward(s, a) - base_task.gamma * (ev_new[i] - ev_old[i]);
        }
    return RewardTable::broadcast(r_bar);
}

double CompositionFn::operator()(std::span<const double> x) const {
    switch (kind) {
        case Kind::min:
            return *std::min_element(x.begin(), x.end());
        case Kind::max:
            return *std::max_element(x.begin(), x.end());
        case Kind::weighted_sum: {
            if (weights.size() != x.size())
                throw std::invalid_argument("CompositionFn: weight count mismatch");
            double acc = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) acc += weights[i] * x[i];
            return acc;
        }
        case Kind::product: {
            double acc = 1.0;
            for (double xi : x) acc *= xi;
            return acc;
        }
        case Kind::custom:
            if (!custom_fn) throw std::invalid_argument("CompositionFn: custom_fn not set");
            return custom_fn(x);
    }
    throw std::logic_error("CompositionFn: unknown kind");
}

std::string CompositionFn::name() const {
    switch (kind) {
        case Kind::min: return "min";
        case Kind::max: return "max";
        case Kind::weighted_sum: return "wsum";
        case Kind::product: return "product";
        case Kind::custom: return "custom";
    }
    return "?";
}

std::pair<CompositionPrior, CorrectiveProblem> compose(
    const CompositionSpec& spec, const std::vector<SoftSolution>& member_solutions) {
    const std::size_t m = spec.member_tasks.size();
    if (m == 0) throw std::invalid_argument("compose: no member tasks");
    if (member_solutions.size() != m)
        throw std::invalid_argument("compose: solution count does not match task count");

    const Task& first = spec.member_tasks.front();
    for (const Task& t : spec.member_tasks) {
        if (!(t.dynamics.transition == first.dynamics.transition) ||
            t.gamma != first.gamma || t.beta != first.beta ||
            !(t.prior.probs == first.prior.probs))
            throw std::invalid_argument("compose: member tasks are not reward varying");
    }
    for (std::size_t i = 0; i < m; ++i)
        require_solution_for(member_solutions[i], spec.member_tasks[i], "compose");

    const int ns = first.num_states();
    const int na = first.num_actions();
    const double gamma = first.gamma;
    const double beta = first.beta;

    std::vector<double> stack(m);
    QTable f_of_q(ns, na);
    for (int s = 0; s < ns; ++s)
        for (int a = 0; a < na; ++a) {
            for (std::size_t i = 0; i < m; ++i) stack[i] = member_solutions[i].q(s, a);
            double y = spec.f(stack);
            if (!std::isfinite(y))
                throw std::invalid_argument("compose: f not finite on observed Q range");
            f_of_q(s, a) = y;
        }

    CompositionPrior prior;
    prior.v_f = extract_value(f_of_q, first.prior, beta);
    prior.pi_f = extract_policy(f_of_q, first.prior, beta);
    prior.f_of_q = f_of_q;

    RewardTable composed_reward(ns, na);
    RewardTable kappa(ns, na);
    for (int s = 0; s < ns; ++s)
        for (int a = 0; a < na; ++a)
            for (int sp = 0; sp < ns; ++sp) {
                for (std::size_t i = 0; i < m; ++i)
                    stack[i] = spec.member_tasks[i].reward.values(s, a, sp);
                double fr = spec.f(stack);
                if (!std::isfinite(fr))
                    throw std::invalid_argument("compose: f not finite on observed reward range");
                composed_reward.values(s, a, sp) = fr;
                kappa.values(s, a, sp) = fr + gamma * prior.v_f[sp] - f_of_q(s, a);
            }

    CorrectiveProblem cp;
    cp.kind = CorrectiveKind::composition;
    cp.base_q = std::move(f_of_q);
    cp.task = first;
    cp.task.reward = std::move(kappa);
    cp.task.prior = prior.pi_f;
    cp.target = first;
    cp.target.reward = std::move(composed_reward);
    return {std::move(prior), std::move(cp)};
}

void TransitionBatch::relabel(const RewardTable& reward) {
    for (Transition& t : records)
        t.reward = reward.values.at(t.state, t.action, t.next_state);
}

bool TransitionBatch::covers(int num_states, int num_actions) const {
    std::vector<char> seen(static_cast<std::size_t>(num_states) * num_actions, 0);
    for (const Transition& t : records) {
        if (t.state < 0 || t.state >= num_states || t.action < 0 || t.action >= num_actions ||
            t.next_state < 0 || t.next_state >= num_states)
            return false;
        seen[static_cast<std::size_t>(t.state) * num_actions + t.action] = 1;
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

TransitionBatch exhaustive_batch(const Task& task) {
    TransitionBatch batch;
    for (int s = 0; s < task.num_states(); ++s)
        for (int a = 0; a < task.num_actions(); ++a) {
            auto p = task.dynamics.transition.row(s, a);
            int succ = -1;
            for (int sp = 0; sp < task.num_states(); ++sp) {
                if (p[sp] == 0.0) continue;
                if (succ >= 0)
                    throw std::invalid_argument("exhaustive_batch: kernel is not deterministic");
                succ = sp;
            }
            batch.records.push_back({s, a, task.reward.values(s, a, succ), succ});
        }
    return batch;
}

TransitionBatch sample_batch(const Task& task, Rng& rng, long count) {
    TransitionBatch batch;
    batch.records.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        int s = rng.uniform_int(task.num_states());
        int a = rng.uniform_int(task.num_actions());
        double u = rng.uniform();
        auto p = task.dynamics.transition.row(s, a);
        int succ = task.num_states() - 1;
        double acc = 0.0;
        for (int sp = 0; sp < task.num_states(); ++sp) {
            acc += p[sp];
            if (u < acc) {
                succ = sp;
                break;
            }
        }
        batch.records.push_back({s, a, task.reward.values(s, a, succ), succ});
    }
    return batch;
}

QTable offline_k_update(const QTable& k, const TransitionBatch& batch,
                        const CorrectiveProblem& corrective, OfflineMode mode,
                        const StochasticSchedule& schedule) {
    const Task& target = corrective.target;
    const int ns = target.num_states();
    const int na = target.num_actions();
    if (k.rows() != ns || k.cols() != na)
        throw std::invalid_argument("offline_k_update: k shape mismatch");

    // Next-state target from data-time quantities only: the target task's
    // prior and the stored base_q, no optimal policy required.
    //   g(s') = (1/beta) log E_{a'~prior} e^{beta (base_q + k)(s',a')} - V_base(s')
    QTable shifted = corrective.base_q + k;
    std::vector<double> g(ns);
    log_partition(shifted, target.prior, target.beta, g);
    std::vector<double> v_base = extract_value(corrective.base_q, target.prior, target.beta);
    for (int s = 0; s < ns; ++s) g[s] -= v_base[s];

    if (mode == OfflineMode::exact_replay) {
        std::vector<long> count(static_cast<std::size_t>(ns) * na, 0);
        Table2 sum(ns, na, 0.0);
        for (const Transition& t : batch.records) {
            count[static_cast<std::size_t>(t.state) * na + t.action]++;
            sum(t.state, t.action) += t.reward + target.gamma * g[t.next_state];
        }
        QTable out(ns, na);
        for (int s = 0; s < ns; ++s)
            for (int a = 0; a < na; ++a) {
                long n = count[static_cast<std::size_t>(s) * na + a];
                if (n == 0)
                    throw std::invalid_argument("offline_k_update: batch does not cover (s=" +
                                                std::to_string(s) + ", a=" + std::to_string(a) +
                                                ")");
                out(s, a) = sum(s, a) / static_cast<double>(n);
            }
        return out;
    }

    // Stochastic per-record updates; g is refreshed after each step at the
    // visited successor's row cost only when that row changed.
    QTable out = k;
    long step = schedule.start_step;
    std::vector<double> row_g(1);
    for (const Transition& t : batch.records) {
        double alpha = schedule.alpha0 / (1.0 + static_cast<double>(step) / schedule.tau);
        double targ = t.reward + target.gamma * g[t.next_state];
        double updated = (1.0 - alpha) * out(t.state, t.action) + alpha * targ;
        out(t.state, t.action) = updated;
        shifted(t.state, t.action) = corrective.base_q(t.state, t.action) + updated;
        // Refresh the changed state's next-state target.
        double m = shifted(t.state, 0);
        for (int a = 1; a < na; ++a) m = std::max(m, shifted(t.state, a));
        double acc = 0.0;
        for (int a = 0; a < na; ++a)
            acc += target.prior.probs(t.state, a) *
                   std::exp(target.beta * (shifted(t.state, a) - m));
        g[t.state] = m + std::log(acc) / target.beta - v_base[t.state];
        ++step;
    }
    return out;
}

}  // namespace erl
