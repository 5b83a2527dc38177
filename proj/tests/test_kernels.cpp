#include <doctest.h>

#include <cmath>

#include "erl/kernels.hpp"
#include "erl/random.hpp"
#include "erl/solver.hpp"
#include "support.hpp"

using namespace erl;

TEST_CASE("parallel backup is bitwise equal to the serial reference") {
    Rng rng(21);
    for (int ns : {1, 3, 17, 64}) {
        int na = 1 + rng.uniform_int(5);
        Task task = random_task(rng, ns, na, 0.95, 2.0, true);
        std::vector<double> values = random_state_values(rng, ns, -4.0, 4.0);
        Table2 serial(ns, na), parallel(ns, na);
        backup_from_values_serial(task, values, serial);
        backup_from_values(task, values, parallel, Execution::parallel);
        for (std::size_t i = 0; i < serial.size(); ++i)
            CHECK(serial.data()[i] == parallel.data()[i]);
    }
}

TEST_CASE("serial and parallel solves agree bitwise") {
    Rng rng(22);
    Task task = random_task(rng, 20, 4, 0.9, 3.0);
    SolveOptions serial = testing::tight_solve();
    serial.exec = Execution::serial;
    SolveOptions parallel = testing::tight_solve();
    parallel.exec = Execution::parallel;
    SoftSolution a = solve(task, serial);
    SoftSolution b = solve(task, parallel);
    REQUIRE(a.trace.iterations == b.trace.iterations);
    CHECK(max_abs_diff(a.q, b.q) == 0.0);
}

TEST_CASE("log_partition stays finite at extreme beta") {
    Table2 q(1, 2);
    q(0, 0) = 1000.0;
    q(0, 1) = 0.0;
    PolicyTable prior = uniform_prior(1, 2);
    std::vector<double> w(1);
    log_partition(q, prior, 1000.0, w);
    CHECK(std::isfinite(w[0]));
    // The max shift makes the partition hug the top entry from below.
    CHECK(w[0] == doctest::Approx(1000.0 - std::log(2.0) / 1000.0).epsilon(1e-12));
}
