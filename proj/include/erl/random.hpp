#pragma once

#include <cstdint>
#include <random>

#include "erl/task.hpp"

namespace erl {

/// mt19937_64 with portable uniform helpers (the engine's output sequence is
/// pinned by the standard; the double mapping here avoids the unpinned
/// std::uniform_real_distribution).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    int uniform_int(int n) {
        return static_cast<int>(eng_() % static_cast<std::uint64_t>(n));
    }

private:
    std::mt19937_64 eng_;
};

/// Dense strictly-positive transition kernel with normalized rows.
TabularDynamics random_dynamics(Rng& rng, int num_states, int num_actions);

RewardTable random_reward(Rng& rng, int num_states, int num_actions, double lo = -1.0,
                          double hi = 1.0);

/// Strictly positive row-normalized policy.
PolicyTable random_policy(Rng& rng, int num_states, int num_actions);

std::vector<double> random_state_values(Rng& rng, int num_states, double lo, double hi);

/// Random well-formed task. The prior is uniform unless random_prior is set.
Task random_task(Rng& rng, int num_states, int num_actions, double gamma, double beta,
                 bool random_prior = false);

Table2 random_q_table(Rng& rng, int num_states, int num_actions, double lo, double hi);

}  // namespace erl
