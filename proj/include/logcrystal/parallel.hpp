#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace logcrystal {

// Splits [0, count) into at most `workers` contiguous chunks and runs
// fn(begin, end) on each. Chunk boundaries depend only on (count, workers),
// and callers write disjoint output slots, so results do not depend on
// scheduling. The first exception thrown by any worker is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    if (count == 0) return;
    const std::size_t n_chunks = std::clamp<std::size_t>(workers, 1, count);
    if (n_chunks == 1) {
        fn(std::size_t{0}, count);
        return;
    }
    std::vector<std::exception_ptr> errors(n_chunks);
    {
        std::vector<std::jthread> pool;
        pool.reserve(n_chunks);
        for (std::size_t c = 0; c < n_chunks; ++c) {
            const std::size_t begin = count * c / n_chunks;
            const std::size_t end = count * (c + 1) / n_chunks;
            pool.emplace_back([&, c, begin, end] {
                try {
                    fn(begin, end);
                } catch (...) {
                    errors[c] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace logcrystal
