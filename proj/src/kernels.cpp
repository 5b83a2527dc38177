#include "erl/kernels.hpp"

#include <atomic>
#include <cmath>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace erl {

void log_partition(const Table2& q, const PolicyTable& prior, double beta,
                   std::span<double> out) {
    const int ns = q.rows();
    const int na = q.cols();
    for (int s = 0; s < ns; ++s) {
        double m = q(s, 0);
        for (int a = 1; a < na; ++a) m = std::max(m, q(s, a));
        double acc = 0.0;
        for (int a = 0; a < na; ++a) acc += prior.probs(s, a) * std::exp(beta * (q(s, a) - m));
        out[s] = m + std::log(acc) / beta;
    }
}

void policy_value(const Table2& q, const PolicyTable& policy, const PolicyTable& prior,
                  double beta, std::span<double> out) {
    const int ns = q.rows();
    const int na = q.cols();
    for (int s = 0; s < ns; ++s) {
        double acc = 0.0;
        for (int a = 0; a < na; ++a) {
            double p = policy.probs(s, a);
            if (p <= 0.0) continue;
            acc += p * (q(s, a) - std::log(p / prior.probs(s, a)) / beta);
        }
        out[s] = acc;
    }
}

namespace {

inline double backup_cell(const Task& task, std::span<const double> values, int s, int a) {
    auto p = task.dynamics.transition.row(s, a);
    auto r = task.reward.values.row(s, a);
    const double gamma = task.gamma;
    double acc = 0.0;
    for (int sp = 0; sp < task.num_states(); ++sp)
        acc += p[sp] * (r[sp] + gamma * values[sp]);
    return acc;
}

}  // namespace

void backup_from_values_serial(const Task& task, std::span<const double> values, Table2& out) {
    const int ns = task.num_states();
    const int na = task.num_actions();
    for (int s = 0; s < ns; ++s) {
        for (int a = 0; a < na; ++a) {
            double x = backup_cell(task, values, s, a);
            if (!std::isfinite(x)) throw NumericError(s, a);
            out(s, a) = x;
        }
    }
}

void backup_from_values(const Task& task, std::span<const double> values, Table2& out,
                        Execution exec) {
#if defined(_OPENMP)
    if (exec == Execution::parallel) {
        const int ns = task.num_states();
        const int na = task.num_actions();
        const long cells = static_cast<long>(ns) * na;
        std::atomic<long> bad{-1};
#pragma omp parallel for schedule(static)
        for (long idx = 0; idx < cells; ++idx) {
            const int s = static_cast<int>(idx / na);
            const int a = static_cast<int>(idx % na);
            double x = backup_cell(task, values, s, a);
            if (!std::isfinite(x)) {
                long expected = -1;
                bad.compare_exchange_strong(expected, idx);
            }
            out(s, a) = x;
        }
        long b = bad.load();
        if (b >= 0) throw NumericError(static_cast<int>(b / na), static_cast<int>(b % na));
        return;
    }
#else
    (void)exec;
#endif
    backup_from_values_serial(task, values, out);
}

}  // namespace erl
