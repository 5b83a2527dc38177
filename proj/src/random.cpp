#include "erl/random.hpp"

namespace erl {

TabularDynamics random_dynamics(Rng& rng, int num_states, int num_actions) {
    TabularDynamics dyn(num_states, num_actions);
    for (int s = 0; s < num_states; ++s) {
        for (int a = 0; a < num_actions; ++a) {
            auto row = dyn.transition.row(s, a);
            double sum = 0.0;
            for (double& x : row) {
                x = 0.05 + rng.uniform();
                sum += x;
            }
            for (double& x : row) x /= sum;
        }
    }
    return dyn;
}

RewardTable random_reward(Rng& rng, int num_states, int num_actions, double lo, double hi) {
    RewardTable r(num_states, num_actions);
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values.data()[i] = rng.uniform(lo, hi);
    return r;
}

PolicyTable random_policy(Rng& rng, int num_states, int num_actions) {
    PolicyTable p{Table2(num_states, num_actions)};
    for (int s = 0; s < num_states; ++s) {
        double sum = 0.0;
        for (int a = 0; a < num_actions; ++a) {
            double x = 0.05 + rng.uniform();
            p.probs(s, a) = x;
            sum += x;
        }
        for (int a = 0; a < num_actions; ++a) p.probs(s, a) /= sum;
    }
    return p;
}

std::vector<double> random_state_values(Rng& rng, int num_states, double lo, double hi) {
    std::vector<double> v(num_states);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

Task random_task(Rng& rng, int num_states, int num_actions, double gamma, double beta,
                 bool random_prior) {
    Task task;
    task.dynamics = random_dynamics(rng, num_states, num_actions);
    task.reward = random_reward(rng, num_states, num_actions);
    task.gamma = gamma;
    task.beta = beta;
    task.prior = random_prior ? random_policy(rng, num_states, num_actions)
                              : uniform_prior(num_states, num_actions);
    return task;
}

Table2 random_q_table(Rng& rng, int num_states, int num_actions, double lo, double hi) {
    Table2 q(num_states, num_actions);
    for (std::size_t i = 0; i < q.size(); ++i) q.data()[i] = rng.uniform(lo, hi);
    return q;
}

}  // namespace erl
