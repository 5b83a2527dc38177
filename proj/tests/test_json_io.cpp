#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "erl/json_io.hpp"
#include "erl/random.hpp"
#include "support.hpp"

using namespace erl;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("erl_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("task json round trip is bit exact") {
    Rng rng(81);
    Task task = random_task(rng, 6, 3, 0.97, 2.5, true);
    json j = task_to_json(task);
    // Through text, as a file would go.
    Task back = task_from_json(json::parse(j.dump()));
    CHECK(back.dynamics.transition == task.dynamics.transition);
    CHECK(back.reward.values == task.reward.values);
    CHECK(back.prior.probs == task.prior.probs);
    CHECK(back.gamma == task.gamma);
    CHECK(back.beta == task.beta);
}

TEST_CASE("reward_rank 2 broadcasts over successors") {
    Rng rng(82);
    Task task = random_task(rng, 3, 2, 0.9, 1.0);
    json j = task_to_json(task);
    json sa = json::array();
    for (int s = 0; s < 3; ++s) {
        json row = json::array();
        for (int a = 0; a < 2; ++a) row.push_back(expected_reward(task, s, a));
        sa.push_back(row);
    }
    j["reward"] = sa;
    j["reward_rank"] = 2;
    Task back = task_from_json(j);
    for (int s = 0; s < 3; ++s)
        for (int a = 0; a < 2; ++a)
            for (int sp = 0; sp < 3; ++sp)
                CHECK(back.reward.values(s, a, sp) == sa[s][a].get<double>());
}

TEST_CASE("grid section builds the task") {
    json j;
    j["grid"] = {{"text", ".G\n..\n"}, {"slip", 0.1}, {"step_reward", -0.01}};
    j["gamma"] = 0.95;
    j["beta"] = 2.0;
    Task task = task_from_json(j);
    CHECK(task.num_states() == 4);
    CHECK(task.gamma == 0.95);
    CHECK(validate_task(task).ok());
}

TEST_CASE("solution and state-array files") {
    TempDir dir;
    Rng rng(83);
    Task task = random_task(rng, 4, 2, 0.9, 2.0);
    SoftSolution sol = solve(task, testing::tight_solve());

    save_solution(sol, dir.file("sol.json"));
    SoftSolution back = load_solution(dir.file("sol.json"));
    CHECK(back.q == sol.q);
    CHECK(back.policy.probs == sol.policy.probs);
    CHECK(back.v == sol.v);
    CHECK(back.trace.iterations == sol.trace.iterations);

    save_state_array(sol.v, dir.file("v.json"));
    CHECK(load_state_array(dir.file("v.json")) == sol.v);
}

TEST_CASE("trace csv") {
    TempDir dir;
    ConvergenceTrace trace;
    trace.errors = {0.5, 0.25, 0.125};
    trace.iterations = 3;
    write_trace_csv(trace, dir.file("t.csv"));
    std::ifstream in(dir.file("t.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "iteration,error");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("composition fn json") {
    json j = {{"kind", "wsum"}, {"weights", {0.25, 0.75}}};
    CompositionFn f = composition_fn_from_json(j);
    std::vector<double> x = {1.0, 3.0};
    CHECK(f(x) == doctest::Approx(2.5).epsilon(1e-15));

    json custom = {{"kind", "custom"},
                   {"table",
                    {{"lo", {0.0, 0.0}},
                     {"hi", {1.0, 1.0}},
                     {"shape", {2, 2}},
                     {"values", {0.0, 1.0, 1.0, 2.0}}}}};
    CompositionFn g = composition_fn_from_json(custom);
    std::vector<double> mid = {0.5, 0.5};
    CHECK(g(mid) == doctest::Approx(1.0).epsilon(1e-12));  // x + y on the grid

    CHECK_THROWS_AS(composition_fn_from_json(json{{"kind", "nope"}}), std::invalid_argument);
}
