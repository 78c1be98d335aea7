#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <vector>

#include "cicurv/parallel.hpp"
#include "cicurv/peaks.hpp"
#include "cicurv/sphere_opt.hpp"

using namespace cicurv;

TEST_CASE("parallel_for visits every index exactly once") {
    const std::size_t n = 1000;
    std::vector<std::atomic<int>> hits(n);
    for (auto& h : hits) h = 0;
    parallel_for(n, 0, [&](std::size_t i) { ++hits[i]; });
    for (std::size_t i = 0; i < n; ++i) CHECK(hits[i] == 1);
    parallel_for(0, 0, [&](std::size_t) { FAIL("body must not run for n = 0"); });
}

TEST_CASE("sphere minimization matches its serial reference bit for bit") {
    SphereObjective rough = [](const Eigen::VectorXcd& v) {
        double s = 0.0;
        for (int i = 0; i < v.size(); ++i)
            s += std::norm(v(i) * v(i) - v((i + 1) % v.size()));
        return s;
    };
    SphereObjective smooth = [](const Eigen::VectorXcd& v) {
        return std::abs((v.array() * v.array()).sum());
    };
    for (int d : {2, 5}) {
        for (std::uint64_t seed : {1ULL, 9ULL}) {
            for (const auto& f : {rough, smooth}) {
                auto serial = minimize_on_sphere_serial(f, d, 64, seed);
                for (int cap : {0, 1, 2, 3}) {
                    auto par = minimize_on_sphere(f, d, 64, seed, cap);
                    CHECK(par.value == serial.value);
                    CHECK(par.restart == serial.restart);
                    CHECK((par.argmin - serial.argmin).norm() == 0.0);
                }
            }
        }
    }
}

TEST_CASE("globalization sweep is identical in serial, parallel and reruns") {
    RunConfig cfg;
    cfg.grid_step = 0.5;
    cfg.avoid_budget = 64;
    auto lat = peaks::discretize(1, 2.5);
    auto cc = peaks::color_classes(lat, 3.0);
    auto sched = peaks::make_schedule(cc.count(), 0.1, cfg.peak_C, cfg.avoid_N0);
    peaks::TransversalityOracle oracle;

    auto serial = peaks::globalize(lat, oracle, 3.0, sched, 1, 1, cfg, false);
    std::string ref = serial.to_json(cfg);
    for (int cap : {0, 1, 2}) {
        RunConfig c2 = cfg;
        c2.threads = cap;
        auto par = peaks::globalize(lat, oracle, 3.0, sched, 1, 1, c2, true);
        CHECK(par.to_json(cfg) == ref);
    }
    auto rerun = peaks::globalize(lat, oracle, 3.0, sched, 1, 1, cfg, true);
    CHECK(rerun.to_json(cfg) == ref);
}
