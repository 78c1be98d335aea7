#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace cicurv {

using SphereObjective = std::function<double(const Eigen::VectorXcd&)>;

struct SphereMinResult {
    Eigen::VectorXcd argmin;
    double value = 0.0;
    int restart = -1;
};

/// Multistart projected gradient descent with backtracking over the unit
/// sphere of C^d (parametrized as the real (2d-1)-sphere). Deterministic:
/// fixed seed gives a fixed result regardless of thread count.
SphereMinResult minimize_on_sphere(const SphereObjective& f, int d, int restarts,
                                   std::uint64_t seed, int thread_cap = 0);

/// Serial reference path (identical restarts, sequential execution).
SphereMinResult minimize_on_sphere_serial(const SphereObjective& f, int d, int restarts,
                                          std::uint64_t seed);

/// Seeded uniform point on the unit sphere of C^d.
Eigen::VectorXcd random_unit_vector(int d, std::uint64_t seed);

}  // namespace cicurv
