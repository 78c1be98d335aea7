// Compares the OpenMP-parallel kernels against their serial reference
// twins: multistart sphere minimization and the globalization sweep.
#include <chrono>
#include <cstdio>

#include "cicurv/config.hpp"
#include "cicurv/parallel.hpp"
#include "cicurv/peaks.hpp"
#include "cicurv/sphere_opt.hpp"

using namespace cicurv;

namespace {

template <typename F>
double time_ms(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main() {
    RunConfig cfg;
    cfg.read_env();
    std::printf("threads: %d\n", effective_threads(cfg.threads));

    // Sphere minimization: a mildly rough objective in C^6.
    SphereObjective f = [](const Eigen::VectorXcd& v) {
        double s = 0.0;
        for (int i = 0; i < v.size(); ++i)
            s += std::norm(v(i) * v(i) - v((i + 1) % v.size()));
        return s;
    };
    SphereMinResult rp, rs;
    double tp = time_ms([&] { rp = minimize_on_sphere(f, 6, 256, 7, cfg.threads); });
    double ts = time_ms([&] { rs = minimize_on_sphere_serial(f, 6, 256, 7); });
    std::printf("sphere_min   parallel %8.1f ms   serial %8.1f ms   speedup %.2fx   agree %d\n",
                tp, ts, ts / tp, rp.value == rs.value && rp.restart == rs.restart);

    // Globalization sweep, n = 1 transversality.
    auto lat = peaks::discretize(1, 3.0);
    auto classes = peaks::color_classes(lat, 3.0);
    auto schedule = peaks::make_schedule(classes.count(), 0.1, cfg.peak_C, cfg.avoid_N0);
    peaks::TransversalityOracle oracle;
    peaks::GlobalizeReport gp, gs;
    double gpt = time_ms(
        [&] { gp = peaks::globalize(lat, oracle, 3.0, schedule, 1, 1, cfg, true); });
    double gst = time_ms(
        [&] { gs = peaks::globalize(lat, oracle, 3.0, schedule, 1, 1, cfg, false); });
    std::printf("globalize    parallel %8.1f ms   serial %8.1f ms   speedup %.2fx   agree %d\n",
                gpt, gst, gst / gpt, gp.to_json(cfg) == gs.to_json(cfg));
    return 0;
}
