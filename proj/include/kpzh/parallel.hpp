// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kpzh {

// Worker count used by the replicate loops. 0 means: KPZH_LAB_THREADS if set,
// otherwise the hardware concurrency.
void set_thread_count(int n);
int thread_count();

// Runs f(i) for i in [0, n). Each replicate owns its own stream, so results
// do not depend on the number of workers or on scheduling.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    const auto workers = static_cast<std::size_t>(std::max(1, thread_count()));
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t m = std::min(workers, n);
    pool.reserve(m - 1);
    for (std::size_t t = 0; t + 1 < m; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace kpzh
