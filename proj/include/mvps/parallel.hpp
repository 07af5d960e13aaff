#pragma once

#include <cstddef>
#include <cstdint>

namespace mvps {

// Every parallel kernel in the project writes to disjoint per-index slots,
// so Serial and Parallel produce bit-identical results; Serial is the
// reference implementation the tests compare against.
enum class ExecMode { Serial, Parallel };

// Worker count for Parallel mode: OpenMP's default, capped by the
// MVPS_THREADS environment variable when set. Returns 1 without OpenMP.
int effective_threads();

template <class F>
void parallel_for(std::size_t n, ExecMode mode, F&& body) {
#ifdef _OPENMP
    if (mode == ExecMode::Parallel) {
        const int threads = effective_threads();
        const std::int64_t sn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) num_threads(threads)
        for (std::int64_t i = 0; i < sn; ++i) body(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace mvps
