#include "extpow/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace extpow::par {

namespace {

std::atomic<int> g_override{0};  // 0 = use environment / hardware

int env_threads() {
    const char* v = std::getenv("EXTPOW_THREADS");
    if (!v) return 0;
    try {
        return std::max(0, std::stoi(v));
    } catch (...) {
        return 0;
    }
}

}  // namespace

int max_threads() {
    int n = g_override.load();
    if (n <= 0) n = env_threads();
#ifdef _OPENMP
    if (n <= 0) n = omp_get_max_threads();
    return std::max(1, n);
#else
    return 1;
#endif
}

void set_max_threads(int n) { g_override.store(n); }

bool parallel_enabled() {
#ifdef _OPENMP
    return max_threads() > 1;
#else
    return false;
#endif
}

}  // namespace extpow::par
