#pragma once

#include <cstdint>
#include <string>

namespace cicurv {

inline constexpr const char* kVersion = "cicurv 0.1.0";

/// Run-wide knobs. Serialized into every report for reproducibility.
struct RunConfig {
    std::uint64_t seed = 1;

    double zero_tol = 1e-9;
    double rank_tol = 1e-8;
    double grid_tol = 0.05;
    // Peaks farther than peak_cutoff from an evaluation point are dropped;
    // exp(-pi/4 * cutoff^2) is recorded as the truncation tail.
    double peak_cutoff = 8.0;
    double tail_tol = 1.5e-22;  // exp(-pi/4 * 64)

    int restarts = 64;
    int avoid_budget = 512;

    // Empirical constants of the peak machinery (per-oracle calibration):
    // single-peak jet norms decay like exp(-dist^2 / peak_C), and the
    // avoidance target is eps * (-log eps)^(-avoid_N0). Calibrated so the
    // distant-peak bound peak_C * exp(-D^2/peak_C) dominates the measured
    // tail for D in {2,3,4} while keeping globalization schedules feasible
    // in double precision.
    double peak_C = 1.5;
    double avoid_N0 = 1.0;

    double grid_step = 0.25;  // evaluation grid inside the unit polydisk

    /// Worker-thread cap; 0 means the OpenMP default. Read from the
    /// CISCURV_THREADS environment variable at startup.
    int threads = 0;

    std::string to_json() const;
    static RunConfig from_json(const std::string& text);
    /// Applies CISCURV_THREADS if set.
    void read_env();
};

}  // namespace cicurv
