#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "erl/tables.hpp"
#include "erl/task.hpp"

namespace erl {

enum class Execution { serial, parallel };

/// Overflow or other non-finite intermediate while sweeping, with the cell
/// where it was produced.
class NumericError : public std::runtime_error {
public:
    NumericError(int s, int a)
        : std::runtime_error("non-finite value at cell (s=" + std::to_string(s) +
                             ", a=" + std::to_string(a) + ")"),
          state(s),
          action(a) {}

    int state;
    int action;
};

/// out[s] = max-shifted (1/beta) log sum_a prior(a|s) exp(beta q(s,a)).
void log_partition(const Table2& q, const PolicyTable& prior, double beta,
                   std::span<double> out);

/// out[s] = sum_a policy(a|s) (q(s,a) - (1/beta) log(policy(a|s)/prior(a|s))).
/// Zero-probability policy entries contribute nothing.
void policy_value(const Table2& q, const PolicyTable& policy, const PolicyTable& prior,
                  double beta, std::span<double> out);

/// out(s,a) = sum_s' p(s'|s,a) (r(s,a,s') + gamma * values[s']).
///
/// Serial reference; the parallel variant must match it bit for bit.
void backup_from_values_serial(const Task& task, std::span<const double> values, Table2& out);

/// OpenMP variant of backup_from_values_serial (falls back to the serial path
/// when exec is serial or OpenMP is unavailable). Per-cell arithmetic is
/// identical to the reference, so results are bitwise equal.
void backup_from_values(const Task& task, std::span<const double> values, Table2& out,
                        Execution exec);

}  // namespace erl
