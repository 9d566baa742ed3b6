#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace sarfeas::detail {

/// 0 means auto (hardware concurrency).
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Runs fn(index) for index in [0, n) on up to `threads` workers.
template <class Fn>
void parallel_for_index(std::uint64_t n, unsigned threads, Fn&& fn) {
    const unsigned n_workers = static_cast<unsigned>(
        std::min<std::uint64_t>(resolve_threads(threads), n));
    if (n_workers <= 1) {
        for (std::uint64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= n) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace sarfeas::detail
