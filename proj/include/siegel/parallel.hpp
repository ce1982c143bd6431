#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace siegel {

// Splits [0, n) into contiguous chunks and sums the per-chunk results.
// Addition makes the merge order-independent, so the total is deterministic
// for any thread count.
inline std::uint64_t parallel_sum(std::size_t n, unsigned threads,
                                  const std::function<std::uint64_t(std::size_t, std::size_t)>& chunk) {
    if (n == 0) return 0;
    if (threads <= 1 || n < 2 * threads) return chunk(0, n);
    std::vector<std::uint64_t> partial(threads, 0);
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    std::size_t step = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = t * step;
        std::size_t hi = lo + step < n ? lo + step : n;
        if (lo >= hi) break;
        pool.emplace_back([&, t, lo, hi] {
            try {
                partial[t] = chunk(lo, hi);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::uint64_t total = 0;
    for (auto v : partial) total += v;
    return total;
}

}  // namespace siegel
