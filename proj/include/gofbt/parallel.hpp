#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace gofbt {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs fn(i) for i in [0, count). Work items must be independent and write
/// only to their own output slot, which makes the result identical for any
/// thread count or schedule.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    const int nt = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)),
                              count == 0 ? 1 : count));
    if (nt <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t chunk = std::max<std::size_t>(1, count / (static_cast<std::size_t>(nt) * 16));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t begin = next.fetch_add(chunk);
            if (begin >= count) return;
            const std::size_t end = std::min(begin + chunk, count);
            for (std::size_t i = begin; i < end; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace gofbt
