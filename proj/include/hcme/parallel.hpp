#ifndef HCME_PARALLEL_HPP
#define HCME_PARALLEL_HPP

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hcme {

/// Pool size: explicit request, overridden by HCME_THREADS when set.
inline int resolve_thread_count(int requested) {
    if (const char* env = std::getenv("HCME_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return requested >= 1 ? requested : 1;
}

/// Runs fn(i) for i in [0, count) on `threads` workers with strided
/// assignment. Cells must be independent; results land in caller-owned
/// slots so assembly order never depends on completion order. The first
/// worker exception is rethrown on the calling thread.
template <class Fn>
void parallel_for(int count, int threads, const Fn& fn) {
    threads = std::min(std::max(threads, 1), std::max(count, 1));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(threads));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([=, &fn, &first_error, &error_mutex] {
            try {
                for (int i = w; i < count; i += threads) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace hcme

#endif
