#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace sp4 {

// Static chunking over [0, n); each chunk runs fn(begin, end, chunk_index).
// Results must be combined by the caller in chunk order so that the output
// is independent of the schedule.
inline void parallel_chunks(std::size_t n, std::size_t n_chunks,
                            const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    std::size_t hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    n_chunks = std::max<std::size_t>(1, std::min({n_chunks, hw, n}));
    if (n_chunks == 1) {
        fn(0, n, 0);
        return;
    }
    std::vector<std::thread> threads;
    std::size_t per = (n + n_chunks - 1) / n_chunks;
    for (std::size_t c = 0; c < n_chunks; ++c) {
        std::size_t b = c * per, e = std::min(n, b + per);
        if (b >= e) break;
        threads.emplace_back(fn, b, e, c);
    }
    for (auto& t : threads) t.join();
}

}  // namespace sp4
