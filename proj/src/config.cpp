#include "cicurv/config.hpp"

#include <cstdlib>

#include <json.hpp>

namespace cicurv {

std::string RunConfig::to_json() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["zero_tol"] = zero_tol;
    j["rank_tol"] = rank_tol;
    j["grid_tol"] = grid_tol;
    j["peak_cutoff"] = peak_cutoff;
    j["tail_tol"] = tail_tol;
    j["restarts"] = restarts;
    j["avoid_budget"] = avoid_budget;
    j["peak_C"] = peak_C;
    j["avoid_N0"] = avoid_N0;
    j["grid_step"] = grid_step;
    j["threads"] = threads;
    return j.dump();
}

RunConfig RunConfig::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RunConfig c;
    c.seed = j.value("seed", c.seed);
    c.zero_tol = j.value("zero_tol", c.zero_tol);
    c.rank_tol = j.value("rank_tol", c.rank_tol);
    c.grid_tol = j.value("grid_tol", c.grid_tol);
    c.peak_cutoff = j.value("peak_cutoff", c.peak_cutoff);
    c.tail_tol = j.value("tail_tol", c.tail_tol);
    c.restarts = j.value("restarts", c.restarts);
    c.avoid_budget = j.value("avoid_budget", c.avoid_budget);
    c.peak_C = j.value("peak_C", c.peak_C);
    c.avoid_N0 = j.value("avoid_N0", c.avoid_N0);
    c.grid_step = j.value("grid_step", c.grid_step);
    c.threads = j.value("threads", c.threads);
    return c;
}

void RunConfig::read_env() {
    if (const char* env = std::getenv("CISCURV_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) threads = t;
    }
}

}  // namespace cicurv
