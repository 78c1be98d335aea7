#include "cicurv/parallel.hpp"

namespace cicurv {

int effective_threads(int cap) {
#ifdef CICURV_HAVE_OPENMP
    int t = omp_get_max_threads();
    if (cap > 0 && cap < t) t = cap;
    return t;
#else
    (void)cap;
    return 1;
#endif
}

void parallel_for(std::size_t n, int thread_cap, const std::function<void(std::size_t)>& fn) {
#ifdef CICURV_HAVE_OPENMP
    const int threads = effective_threads(thread_cap);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(n); ++i) fn(static_cast<std::size_t>(i));
#else
    (void)thread_cap;
    serial_for(n, fn);
#endif
}

void serial_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace cicurv
