#include "mvps/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mvps {

int effective_threads() {
#ifdef _OPENMP
    int threads = omp_get_max_threads();
    if (const char* env = std::getenv("MVPS_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1 && cap < threads) threads = cap;
        } catch (...) {
            // ignore unparsable values, keep the OpenMP default
        }
    }
    return threads;
#else
    return 1;
#endif
}

}  // namespace mvps
