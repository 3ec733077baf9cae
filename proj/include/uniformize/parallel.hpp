#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace uniformize {

/// Worker count: UNIFORMIZE_THREADS caps the hardware default.
inline int worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    int n = hw > 0 ? static_cast<int>(hw) : 1;
    if (const char* env = std::getenv("UNIFORMIZE_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0 && cap < n) n = cap;
    }
    return n;
}

/// Index-parallel loop with deterministic work assignment. Results must be
/// written to pre-sized, index-addressed storage.
inline void parallel_for(size_t count, const std::function<void(size_t)>& fn) {
    int workers = worker_count();
    if (workers <= 1 || count < 2) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    size_t chunk = (count + static_cast<size_t>(workers) - 1) / static_cast<size_t>(workers);
    for (int w = 0; w < workers; ++w) {
        size_t lo = static_cast<size_t>(w) * chunk;
        size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace uniformize
