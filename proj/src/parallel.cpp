#include "tiletrack/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tiletrack {

static std::atomic<int> g_threads{0};

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

int thread_count() {
#ifdef _OPENMP
    const int n = g_threads.load();
    return n == 0 ? omp_get_max_threads() : n;
#else
    return 1;
#endif
}

namespace detail {

void parallel_for_impl(int n, void* ctx, void (*body)(void*, int)) {
    const int threads = thread_count();
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(ctx, i);
        return;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int i = 0; i < n; ++i) body(ctx, i);
#else
    for (int i = 0; i < n; ++i) body(ctx, i);
#endif
}

} // namespace detail
} // namespace tiletrack
