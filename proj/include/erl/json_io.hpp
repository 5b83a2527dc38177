#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "erl/envs.hpp"
#include "erl/solver.hpp"
#include "erl/task.hpp"
#include "erl/transfer.hpp"

namespace erl {

using nlohmann::json;

json task_to_json(const Task& task);

/// Accepts either explicit tables or a "grid" section with a text map.
/// Rewards may be a full (s,a,s') array or an (s,a) array with
/// "reward_rank": 2, which broadcasts over successors. Stochastic rows
/// within tolerance of 1 are renormalized on load.
Task task_from_json(const json& j);

void save_task(const Task& task, const std::string& path);
Task load_task(const std::string& path);

json solution_to_json(const SoftSolution& solution);
SoftSolution solution_from_json(const json& j);
void save_solution(const SoftSolution& solution, const std::string& path);
SoftSolution load_solution(const std::string& path);

/// Plain JSON array of per-state reals (potentials, value functions).
std::vector<double> load_state_array(const std::string& path);
void save_state_array(const std::vector<double>& values, const std::string& path);

json policy_to_json(const PolicyTable& policy);
PolicyTable policy_from_json(const json& j);

/// {"tasks": [paths...], "f": {"kind": min|max|wsum|product|custom, ...}}.
/// Custom functions use a regular multilinear-interpolation grid:
/// {"kind": "custom", "table": {"lo": [...], "hi": [...], "shape": [...],
/// "values": [...]}}.
CompositionSpec composition_spec_from_json(const json& j, const std::string& base_dir);

CompositionFn composition_fn_from_json(const json& j);

/// "iteration,error" rows, one per sweep.
void write_trace_csv(const ConvergenceTrace& trace, const std::string& path);

json load_json_file(const std::string& path);
void save_json_file(const json& j, const std::string& path);

}  // namespace erl
