#ifndef TKTP_THREADS_HPP
#define TKTP_THREADS_HPP

#include <cstddef>
#include <thread>
#include <vector>

namespace tktp {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Static block partition of [0, total) across `threads` workers.
// fn(begin, end) must be safe to run concurrently on disjoint ranges.
// Deterministic output requires fn to write only to its own range.
template <typename Fn>
void parallel_for(std::size_t total, int threads, Fn&& fn) {
    if (threads <= 1 || total < 2) {
        fn(std::size_t{0}, total);
        return;
    }
    const auto nw = static_cast<std::size_t>(threads);
    const std::size_t chunk = (total + nw - 1) / nw;
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        const std::size_t begin = w * chunk;
        if (begin >= total) break;
        const std::size_t end = begin + chunk < total ? begin + chunk : total;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace tktp

#endif
