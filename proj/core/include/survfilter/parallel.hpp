#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace survfilter {

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Static-partition parallel loop. Tasks must write to disjoint, preallocated
// slots; reductions happen afterwards in index order, so results do not depend
// on the thread count. The first exception thrown by a task is rethrown on the
// calling thread.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& body) {
    unsigned nt = resolve_threads(threads);
    if (nt <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    if (nt > n) nt = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (std::size_t i = t; i < n; i += nt) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace survfilter
