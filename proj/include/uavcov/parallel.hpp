#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace uavcov {

inline int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Split [0, n) into fixed-size blocks, evaluate them on a small pool and
/// return the per-block results indexed by block number. Block boundaries do
/// not depend on the thread count, so any reduction the caller performs in
/// block order is bit-reproducible regardless of scheduling.
template <typename R>
std::vector<R> parallel_map_blocks(int64_t n, int64_t block_size, int jobs,
                                   const std::function<R(int64_t, int64_t)>& fn) {
    const int64_t n_blocks = block_size > 0 ? (n + block_size - 1) / block_size : 0;
    std::vector<R> results(static_cast<size_t>(n_blocks));
    if (n_blocks == 0) return results;

    const int workers = std::min<int64_t>(resolve_jobs(jobs), n_blocks);
    std::atomic<int64_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto run = [&] {
        for (;;) {
            const int64_t b = next.fetch_add(1);
            if (b >= n_blocks) return;
            const int64_t lo = b * block_size;
            const int64_t hi = std::min(n, lo + block_size);
            try {
                results[static_cast<size_t>(b)] = fn(lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    if (workers <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(run);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

}  // namespace uavcov
