#pragma once

#include <utility>

namespace tiletrack {

/// Set the worker-thread count for parallel kernels. 0 = hardware default,
/// 1 = serial execution. Parallel loops write disjoint output slots, so
/// results are identical for any thread count.
void set_thread_count(int n);
int thread_count();

namespace detail {
void parallel_for_impl(int n, void* ctx, void (*body)(void*, int));
}

template <typename F>
void parallel_for(int n, F&& body) {
    auto fn = std::forward<F>(body);
    detail::parallel_for_impl(n, &fn, [](void* ctx, int i) { (*static_cast<decltype(&fn)>(ctx))(i); });
}

} // namespace tiletrack
