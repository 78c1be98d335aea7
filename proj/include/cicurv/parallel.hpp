#pragma once

#include <cstddef>
#include <functional>

#ifdef CICURV_HAVE_OPENMP
#include <omp.h>
#endif

namespace cicurv {

/// Effective worker count (0 in the config means the OpenMP default).
int effective_threads(int cap);

/// Runs fn(i) for i in [0, n). Iterations must be independent; callers
/// reduce serially afterwards so results do not depend on scheduling.
void parallel_for(std::size_t n, int thread_cap, const std::function<void(std::size_t)>& fn);

/// Serial twin of parallel_for, kept as the reference path for tests and
/// benchmarks.
void serial_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace cicurv
