#include "erl/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace erl {

namespace {

json table2_to_json(const Table2& t) {
    json rows = json::array();
    for (int r = 0; r < t.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < t.cols(); ++c) row.push_back(t(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Table2 table2_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j.front().is_array())
        throw std::invalid_argument("json: expected a 2-D array");
    Table2 t(static_cast<int>(j.size()), static_cast<int>(j.front().size()));
    for (int r = 0; r < t.rows(); ++r) {
        const json& row = j[r];
        if (static_cast<int>(row.size()) != t.cols())
            throw std::invalid_argument("json: ragged 2-D array");
        for (int c = 0; c < t.cols(); ++c) t(r, c) = row[c].get<double>();
    }
    return t;
}

json table3_to_json(const Table3& t) {
    json out = json::array();
    for (int i = 0; i < t.dim0(); ++i) {
        json mid = json::array();
        for (int j2 = 0; j2 < t.dim1(); ++j2) {
            json row = json::array();
            for (int k = 0; k < t.dim2(); ++k) row.push_back(t(i, j2, k));
            mid.push_back(std::move(row));
        }
        out.push_back(std::move(mid));
    }
    return out;
}

Table3 table3_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j.front().is_array() || j.front().empty() ||
        !j.front().front().is_array())
        throw std::invalid_argument("json: expected a 3-D array");
    Table3 t(static_cast<int>(j.size()), static_cast<int>(j.front().size()),
             static_cast<int>(j.front().front().size()));
    for (int i = 0; i < t.dim0(); ++i) {
        const json& mid = j[i];
        if (static_cast<int>(mid.size()) != t.dim1())
            throw std::invalid_argument("json: ragged 3-D array");
        for (int j2 = 0; j2 < t.dim1(); ++j2) {
            const json& row = mid[j2];
            if (static_cast<int>(row.size()) != t.dim2())
                throw std::invalid_argument("json: ragged 3-D array");
            for (int k = 0; k < t.dim2(); ++k) t(i, j2, k) = row[k].get<double>();
        }
    }
    return t;
}

std::vector<double> trace_errors(const ConvergenceTrace& t) { return t.errors; }

}  // namespace

json task_to_json(const Task& task) {
    json j;
    j["num_states"] = task.num_states();
    j["num_actions"] = task.num_actions();
    j["gamma"] = task.gamma;
    j["beta"] = task.beta;
    j["prior"] = table2_to_json(task.prior.probs);
    j["transition"] = table3_to_json(task.dynamics.transition);
    j["reward"] = table3_to_json(task.reward.values);
    return j;
}

Task task_from_json(const json& j) {
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        GridSpec spec = parse_grid(g.at("text").get<std::string>());
        if (g.contains("slip")) spec.slip_prob = g.at("slip").get<double>();
        if (g.contains("step_reward")) spec.step_reward = g.at("step_reward").get<double>();
        if (g.contains("goal_reward")) {
            spec.goal_reward = g.at("goal_reward").get<double>();
            for (auto& cell : spec.cells)
                if (cell.kind == CellKind::goal && cell.reward != 0.0)
                    cell.reward = spec.goal_reward;
        }
        return grid_to_task(spec, j.at("gamma").get<double>(), j.at("beta").get<double>());
    }

    Task task;
    const int ns = j.at("num_states").get<int>();
    const int na = j.at("num_actions").get<int>();
    task.gamma = j.at("gamma").get<double>();
    task.beta = j.at("beta").get<double>();
    task.prior = PolicyTable{table2_from_json(j.at("prior"))};

    Table3 transition = table3_from_json(j.at("transition"));
    task.dynamics.num_states = ns;
    task.dynamics.num_actions = na;
    task.dynamics.transition = std::move(transition);
    task.dynamics.normalize_rows();

    int reward_rank = j.value("reward_rank", 3);
    if (reward_rank == 2)
        task.reward = RewardTable::broadcast(table2_from_json(j.at("reward")));
    else
        task.reward = RewardTable{table3_from_json(j.at("reward"))};

    if (task.dynamics.transition.dim0() != ns || task.dynamics.transition.dim1() != na)
        throw std::invalid_argument("task json: transition shape disagrees with counts");
    return task;
}

void save_task(const Task& task, const std::string& path) {
    save_json_file(task_to_json(task), path);
}

Task load_task(const std::string& path) { return task_from_json(load_json_file(path)); }

json solution_to_json(const SoftSolution& solution) {
    json j;
    j["q"] = table2_to_json(solution.q);
    j["v"] = solution.v;
    j["policy"] = table2_to_json(solution.policy.probs);
    j["trace"] = {{"errors", trace_errors(solution.trace)},
                  {"iterations", solution.trace.iterations},
                  {"converged", solution.trace.converged},
                  {"tolerance", solution.trace.tolerance}};
    return j;
}

SoftSolution solution_from_json(const json& j) {
    SoftSolution s;
    s.q = table2_from_json(j.at("q"));
    s.v = j.at("v").get<std::vector<double>>();
    s.policy = PolicyTable{table2_from_json(j.at("policy"))};
    const json& t = j.at("trace");
    s.trace.errors = t.at("errors").get<std::vector<double>>();
    s.trace.iterations = t.at("iterations").get<long>();
    s.trace.converged = t.at("converged").get<bool>();
    s.trace.tolerance = t.at("tolerance").get<double>();
    return s;
}

void save_solution(const SoftSolution& solution, const std::string& path) {
    save_json_file(solution_to_json(solution), path);
}

SoftSolution load_solution(const std::string& path) {
    return solution_from_json(load_json_file(path));
}

std::vector<double> load_state_array(const std::string& path) {
    json j = load_json_file(path);
    if (!j.is_array()) throw std::invalid_argument(path + ": expected a JSON array");
    return j.get<std::vector<double>>();
}

void save_state_array(const std::vector<double>& values, const std::string& path) {
    save_json_file(json(values), path);
}

json policy_to_json(const PolicyTable& policy) { return table2_to_json(policy.probs); }

PolicyTable policy_from_json(const json& j) { return PolicyTable{table2_from_json(j)}; }

namespace {

/// Multilinear interpolation over a regular grid, clamped at the box edges.
class GridInterpolant {
public:
    GridInterpolant(std::vector<double> lo, std::vector<double> hi, std::vector<int> shape,
                    std::vector<double> values)
        : lo_(std::move(lo)), hi_(std::move(hi)), shape_(std::move(shape)),
          values_(std::move(values)) {
        std::size_t total = 1;
        for (std::size_t d = 0; d < shape_.size(); ++d) {
            if (shape_[d] < 2) throw std::invalid_argument("custom f: grid shape must be >= 2");
            if (!(hi_[d] > lo_[d])) throw std::invalid_argument("custom f: hi must exceed lo");
            total *= static_cast<std::size_t>(shape_[d]);
        }
        if (values_.size() != total)
            throw std::invalid_argument("custom f: value count does not match shape");
    }

    double operator()(std::span<const double> x) const {
        const std::size_t m = shape_.size();
        if (x.size() != m) throw std::invalid_argument("custom f: arity mismatch");
        std::vector<int> base(m);
        std::vector<double> frac(m);
        for (std::size_t d = 0; d < m; ++d) {
            double t = (x[d] - lo_[d]) / (hi_[d] - lo_[d]) * (shape_[d] - 1);
            t = std::min(std::max(t, 0.0), static_cast<double>(shape_[d] - 1));
            int i = std::min(static_cast<int>(t), shape_[d] - 2);
            base[d] = i;
            frac[d] = t - i;
        }
        double acc = 0.0;
        for (std::size_t corner = 0; corner < (std::size_t{1} << m); ++corner) {
            double w = 1.0;
            std::size_t idx = 0;
            for (std::size_t d = 0; d < m; ++d) {
                int offset = (corner >> d) & 1;
                w *= offset ? frac[d] : 1.0 - frac[d];
                idx = idx * static_cast<std::size_t>(shape_[d]) +
                      static_cast<std::size_t>(base[d] + offset);
            }
            acc += w * values_[idx];
        }
        return acc;
    }

private:
    std::vector<double> lo_, hi_;
    std::vector<int> shape_;
    std::vector<double> values_;
};

}  // namespace

CompositionFn composition_fn_from_json(const json& j) {
    CompositionFn f;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "min") {
        f.kind = CompositionFn::Kind::min;
    } else if (kind == "max") {
        f.kind = CompositionFn::Kind::max;
    } else if (kind == "wsum") {
        f.kind = CompositionFn::Kind::weighted_sum;
        f.weights = j.at("weights").get<std::vector<double>>();
    } else if (kind == "product") {
        f.kind = CompositionFn::Kind::product;
    } else if (kind == "custom") {
        f.kind = CompositionFn::Kind::custom;
        const json& t = j.at("table");
        GridInterpolant interp(t.at("lo").get<std::vector<double>>(),
                               t.at("hi").get<std::vector<double>>(),
                               t.at("shape").get<std::vector<int>>(),
                               t.at("values").get<std::vector<double>>());
        f.custom_fn = [interp = std::move(interp)](std::span<const double> x) {
            return interp(x);
        };
    } else {
        throw std::invalid_argument("composition f: unknown kind '" + kind + "'");
    }
    return f;
}

CompositionSpec composition_spec_from_json(const json& j, const std::string& base_dir) {
    CompositionSpec spec;
    for (const auto& entry : j.at("tasks")) {
        std::filesystem::path p = entry.get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        spec.member_tasks.push_back(load_task(p.string()));
    }
    spec.f = composition_fn_from_json(j.at("f"));
    return spec;
}

void write_trace_csv(const ConvergenceTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "iteration,error\n";
    char buf[64];
    for (std::size_t k = 0; k < trace.errors.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", k + 1, trace.errors[k]);
        out << buf;
    }
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    json j;
    in >> j;
    return j;
}

void save_json_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace erl
