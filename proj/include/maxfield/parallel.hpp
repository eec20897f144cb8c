#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace maxfield {

/**
 * Evaluates fn(i) for i in [0, n) on `threads` workers and returns the results
 * in index order. Work is handed out by an atomic counter; since each call
 * owns its inputs (replication i derives stream i) the output does not depend
 * on the number of workers. The first exception thrown by any call is
 * rethrown after all workers stop.
 */
template <class Fn>
auto run_replications(std::int64_t n, int threads, Fn&& fn) -> std::vector<decltype(fn(std::int64_t{}))> {
    using T = decltype(fn(std::int64_t{}));
    std::vector<T> out(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)));
    if (n <= 0) return out;

    const int workers = static_cast<int>(std::clamp<std::int64_t>(threads <= 0 ? 1 : threads, 1, n));
    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) break;
            try {
                out[static_cast<std::size_t>(i)] = fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    return out;
}

} // namespace maxfield
