#pragma once

#include <cstdint>

#ifdef NLSGD_HAVE_OPENMP
#include <omp.h>
#endif

namespace nlsgd {

// Runs fn(i) for i in [0, n). workers == 1 is the serial reference path;
// workers > 1 uses OpenMP when available. Callers must make fn(i) independent
// and deterministic in i so the two paths produce identical results.
template <class F>
void parallel_for(std::uint64_t n, int workers, F&& fn) {
#ifdef NLSGD_HAVE_OPENMP
  if (workers > 1) {
#pragma omp parallel for num_threads(workers) schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      fn(static_cast<std::uint64_t>(i));
    return;
  }
#else
  (void)workers;
#endif
  for (std::uint64_t i = 0; i < n; ++i) fn(i);
}

}  // namespace nlsgd
