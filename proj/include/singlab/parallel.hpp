#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace singlab {

// Worker count: explicit value, else THREADS env var, else hardware.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(chunk) for chunk in [0, n_chunks).  Chunk identity, not thread
// identity, determines all randomness, so results are reproducible for
// any worker count as long as callers reduce per-chunk output in chunk
// order.
inline void parallel_chunks(std::int64_t n_chunks, int threads,
                            const std::function<void(std::int64_t)>& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n_chunks <= 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c) fn(c);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    const int workers = static_cast<int>(
        std::min<std::int64_t>(threads, n_chunks));
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t c = next.fetch_add(1);
                if (c >= n_chunks) break;
                fn(c);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace singlab
