// SPDX-License-Identifier: Apache-2.0
#include "kpzh/parallel.hpp"

#include <cstdlib>
#include <string>

namespace kpzh {

namespace {
std::atomic<int> g_threads{0};
}

void set_thread_count(int n) { g_threads.store(std::max(0, n)); }

int thread_count() {
    const int n = g_threads.load();
    if (n > 0) return n;
    if (const char* env = std::getenv("KPZH_LAB_THREADS")) {
        try {
            const int e = std::stoi(env);
            if (e > 0) return e;
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace kpzh
