#include "semiorbit/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace semiorbit {

int default_thread_count()
{
    if (const char* env = std::getenv("SEMIORBIT_THREADS")) {
        try {
            int t = std::stoi(env);
            if (t > 0) {
                return t;
            }
        } catch (const std::exception&) {
        }
    }
    return omp_get_max_threads();
}

int ExecPolicy::resolved_threads() const { return threads > 0 ? threads : default_thread_count(); }

} // namespace semiorbit
