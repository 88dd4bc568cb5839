#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#ifdef SRE_HAVE_OPENMP
#include <omp.h>
#endif

namespace sre {

inline int default_jobs() {
#ifdef SRE_HAVE_OPENMP
  int n = omp_get_max_threads();
  return n > 0 ? n : 1;
#else
  unsigned n = std::thread::hardware_concurrency();
  return n > 0 ? static_cast<int>(n) : 1;
#endif
}

// Runs fn(0..n-1). jobs <= 1 runs the serial reference path; otherwise the
// iterations are distributed over an OpenMP worker pool (or run serially
// when OpenMP is unavailable). Results must be written to per-index slots so
// aggregation is deterministic regardless of completion order. The first
// exception thrown by any iteration is captured and rethrown on the calling
// thread after the loop drains.
inline void par_for(size_t n, int jobs, const std::function<void(size_t)> &fn) {
  if (n == 0) return;
  std::vector<std::exception_ptr> errors(n);
#ifdef SRE_HAVE_OPENMP
  if (jobs > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      try {
        fn(static_cast<size_t>(i));
      } catch (...) {
        errors[static_cast<size_t>(i)] = std::current_exception();
      }
    }
    for (auto &e : errors)
      if (e) std::rethrow_exception(e);
    return;
  }
#else
  (void)jobs;
#endif
  for (size_t i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace sre
