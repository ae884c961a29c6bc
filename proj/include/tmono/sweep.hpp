// sweep.hpp — Deterministic work partitioning. Each index owns an output slot,
// so the reduction order (plain index order) is independent of thread count.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace tmono {

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Exceptions are
/// captured and the one thrown at the lowest index is rethrown, so failures
/// are reproducible regardless of scheduling.
inline void parallel_for(std::int64_t count, int jobs, const std::function<void(std::int64_t)>& fn) {
    if (count <= 0) return;
    if (jobs < 1) jobs = 1;
    jobs = static_cast<int>(std::min<std::int64_t>(jobs, count));

    if (jobs == 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::int64_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    std::atomic<std::int64_t> first_error{count};

    auto worker = [&] {
        const std::int64_t chunk = 16;
        for (;;) {
            const std::int64_t start = next.fetch_add(chunk);
            if (start >= count) return;
            const std::int64_t stop = std::min(start + chunk, count);
            for (std::int64_t i = start; i < stop; ++i) {
                if (first_error.load(std::memory_order_relaxed) < i) continue;
                try {
                    fn(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(i)] = std::current_exception();
                    std::int64_t cur = first_error.load();
                    while (i < cur && !first_error.compare_exchange_weak(cur, i)) {}
                }
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    const std::int64_t fe = first_error.load();
    if (fe < count) std::rethrow_exception(errors[static_cast<std::size_t>(fe)]);
}

}  // namespace tmono
