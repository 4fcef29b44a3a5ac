#include "cwlo/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cwlo {

int configured_threads() {
    if (const char* env = std::getenv("CW_LO_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) {
                return v;
            }
        } catch (const std::exception&) {
            // fall through to the runtime default
        }
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void apply_thread_limit() {
#ifdef _OPENMP
    omp_set_num_threads(configured_threads());
#endif
}

}  // namespace cwlo
