#include "chromaforge/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace chromaforge {
namespace {
std::atomic<int> g_override{0};

int default_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}
}  // namespace

int thread_count() {
    if (const int n = g_override.load(); n > 0) return n;
    if (const char* env = std::getenv("CHROMAFORGE_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
            // unparsable value: fall back to the default
        }
    }
    return default_threads();
}

void set_thread_count(int n) { g_override.store(n > 0 ? n : 0); }

}  // namespace chromaforge
