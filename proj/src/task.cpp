#include "erl/task.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace erl {

void TabularDynamics::normalize_rows(double tol) {
    // Rows already within summation round-off of 1 are left untouched, which
    // makes renormalization idempotent and keeps save/load round trips
    // bit-exact. The slack is always below the row-sum tolerance.
    const double eps = std::numeric_limits<double>::epsilon();
    const double slack = std::min(4.0 * (num_states + 4) * eps, tol);
    for (int s = 0; s < num_states; ++s) {
        for (int a = 0; a < num_actions; ++a) {
            auto row = transition.row(s, a);
            double sum = 0.0;
            for (double x : row) sum += x;
            double drift = std::abs(sum - 1.0);
            if (sum > 0.0 && drift > slack && drift <= tol) {
                for (double& x : row) x /= sum;
            }
        }
    }
}

RewardTable RewardTable::broadcast(const Table2& state_action) {
    RewardTable out(state_action.rows(), state_action.cols());
    for (int s = 0; s < state_action.rows(); ++s)
        for (int a = 0; a < state_action.cols(); ++a) {
            auto row = out.values.row(s, a);
            for (double& x : row) x = state_action(s, a);
        }
    return out;
}

std::string Violation::describe() const {
    std::ostringstream os;
    os << rule;
    if (state >= 0) os << " at s=" << state;
    if (action >= 0) os << " a=" << action;
    os << " (magnitude " << magnitude << ")";
    return os.str();
}

std::string ValidationReport::describe() const {
    std::ostringstream os;
    for (const auto& v : violations) os << v.describe() << "\n";
    return os.str();
}

namespace {

void check_policy_rows(const PolicyTable& p, const std::string& name, bool require_positive,
                       std::vector<Violation>& out) {
    for (int s = 0; s < p.num_states(); ++s) {
        double sum = 0.0;
        for (int a = 0; a < p.num_actions(); ++a) {
            double x = p.probs(s, a);
            if (!std::isfinite(x) || x < 0.0) {
                out.push_back({name + "_negative", s, a, x});
            } else if (require_positive && x == 0.0) {
                out.push_back({name + "_not_positive", s, a, 0.0});
            }
            sum += x;
        }
        if (!(std::abs(sum - 1.0) <= kRowSumTol))
            out.push_back({name + "_row_sum", s, -1, sum - 1.0});
    }
}

}  // namespace

ValidationReport validate_task(const Task& task) {
    ValidationReport report;
    auto& v = report.violations;

    const int ns = task.num_states();
    const int na = task.num_actions();
    if (ns <= 0 || na <= 0) {
        v.push_back({"empty_state_or_action_space", -1, -1, 0.0});
        return report;
    }
    if (task.dynamics.transition.dim0() != ns || task.dynamics.transition.dim1() != na ||
        task.dynamics.transition.dim2() != ns) {
        v.push_back({"transition_shape", -1, -1, 0.0});
        return report;
    }
    if (task.reward.values.dim0() != ns || task.reward.values.dim1() != na ||
        task.reward.values.dim2() != ns)
        v.push_back({"reward_shape", -1, -1, 0.0});
    if (task.prior.num_states() != ns || task.prior.num_actions() != na)
        v.push_back({"prior_shape", -1, -1, 0.0});
    if (!v.empty()) return report;

    for (int s = 0; s < ns; ++s) {
        for (int a = 0; a < na; ++a) {
            double sum = 0.0;
            for (int sp = 0; sp < ns; ++sp) {
                double p = task.dynamics.transition(s, a, sp);
                if (!(p >= 0.0) || !std::isfinite(p))
                    v.push_back({"transition_negative", s, a, p});
                sum += p;
                double r = task.reward.values(s, a, sp);
                if (!std::isfinite(r)) v.push_back({"reward_not_finite", s, a, r});
            }
            if (!(std::abs(sum - 1.0) <= kRowSumTol))
                v.push_back({"transition_row_sum", s, a, sum - 1.0});
        }
    }

    check_policy_rows(task.prior, "prior", /*require_positive=*/true, v);

    if (!(task.gamma > 0.0 && task.gamma < 1.0))
        v.push_back({"gamma_out_of_range", -1, -1, task.gamma});
    if (!(task.beta > 0.0) || !std::isfinite(task.beta))
        v.push_back({"beta_out_of_range", -1, -1, task.beta});

    return report;
}

void require_valid(const Task& task) {
    ValidationReport report = validate_task(task);
    if (!report.ok())
        throw std::invalid_argument("invalid task: " + report.violations.front().describe());
}

PolicyTable uniform_prior(int num_states, int num_actions) {
    if (num_states < 1 || num_actions < 1)
        throw std::invalid_argument("uniform_prior: counts must be >= 1");
    return PolicyTable{Table2(num_states, num_actions, 1.0 / num_actions)};
}

double expected_reward(const Task& task, int s, int a) {
    if (s < 0 || s >= task.num_states() || a < 0 || a >= task.num_actions())
        throw std::out_of_range("expected_reward: index out of range");
    auto p = task.dynamics.transition.row(s, a);
    auto r = task.reward.values.row(s, a);
    double acc = 0.0;
    for (int sp = 0; sp < task.num_states(); ++sp) acc += p[sp] * r[sp];
    return acc;
}

Table2 expected_reward_table(const Task& task) {
    Table2 out(task.num_states(), task.num_actions());
    for (int s = 0; s < task.num_states(); ++s)
        for (int a = 0; a < task.num_actions(); ++a) out(s, a) = expected_reward(task, s, a);
    return out;
}

}  // namespace erl
