#include "cicurv/sphere_opt.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "cicurv/parallel.hpp"

namespace cicurv {

namespace {

Eigen::VectorXcd real_to_complex(const Eigen::VectorXd& x) {
    Eigen::VectorXcd v(x.size() / 2);
    for (int i = 0; i < v.size(); ++i) v(i) = std::complex<double>(x(2 * i), x(2 * i + 1));
    return v;
}

double eval_real(const SphereObjective& f, const Eigen::VectorXd& x) {
    return f(real_to_complex(x));
}

SphereMinResult run_single(const SphereObjective& f, int d, std::uint64_t seed) {
    const int dim = 2 * d;
    Eigen::VectorXd x(dim);
    {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> nd;
        for (int i = 0; i < dim; ++i) x(i) = nd(rng);
        x.normalize();
    }

    double fx = eval_real(f, x);
    const double h = 1e-6;
    const int max_iter = 300;

    for (int iter = 0; iter < max_iter; ++iter) {
        // Central-difference gradient, then projected onto the tangent space.
        Eigen::VectorXd g(dim);
        for (int i = 0; i < dim; ++i) {
            Eigen::VectorXd xp = x, xm = x;
            xp(i) += h;
            xm(i) -= h;
            xp.normalize();
            xm.normalize();
            g(i) = (eval_real(f, xp) - eval_real(f, xm)) / (2 * h);
        }
        g -= g.dot(x) * x;
        double gn = g.norm();
        if (gn < 1e-12) break;

        double step = 0.5;
        bool moved = false;
        while (step > 1e-13) {
            Eigen::VectorXd xn = (x - step * g).normalized();
            double fn = eval_real(f, xn);
            if (fn < fx - 1e-4 * step * gn * gn) {
                x = xn;
                fx = fn;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    return SphereMinResult{real_to_complex(x), fx, -1};
}

}  // namespace

Eigen::VectorXcd random_unit_vector(int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::VectorXcd v(d);
    for (int i = 0; i < d; ++i) v(i) = std::complex<double>(nd(rng), nd(rng));
    v.normalize();
    return v;
}

static SphereMinResult minimize_impl(const SphereObjective& f, int d, int restarts,
                                     std::uint64_t seed, int thread_cap, bool parallel) {
    if (restarts < 1) restarts = 1;
    std::vector<SphereMinResult> results(restarts);
    auto body = [&](std::size_t r) {
        results[r] = run_single(f, d, seed * 0x9e3779b97f4a7c15ULL + r);
        results[r].restart = static_cast<int>(r);
    };
    if (parallel)
        parallel_for(static_cast<std::size_t>(restarts), thread_cap, body);
    else
        serial_for(static_cast<std::size_t>(restarts), body);

    // Deterministic reduction: best value, ties broken by restart index.
    SphereMinResult best = results[0];
    for (int r = 1; r < restarts; ++r)
        if (results[r].value < best.value) best = results[r];
    return best;
}

SphereMinResult minimize_on_sphere(const SphereObjective& f, int d, int restarts,
                                   std::uint64_t seed, int thread_cap) {
    return minimize_impl(f, d, restarts, seed, thread_cap, true);
}

SphereMinResult minimize_on_sphere_serial(const SphereObjective& f, int d, int restarts,
                                          std::uint64_t seed) {
    return minimize_impl(f, d, restarts, seed, 0, false);
}

}  // namespace cicurv
