#pragma once

// Internal helpers shared by the library sources.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace cubecx::detail {

/// Uniform integer in [0, bound) from a 64-bit engine (multiply-shift), so
/// sampled outputs do not depend on the standard library's distributions.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * bound) >> 64);
}

inline unsigned worker_count(std::size_t work_items) {
    unsigned hw = std::max(1U, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(1, work_items)));
}

/// Runs body(worker, begin, end) over contiguous chunks of [0, n). Workers are
/// numbered 0..workers-1 in chunk order.
template <typename Body>
void parallel_chunks(std::size_t n, unsigned workers, Body&& body) {
    if (workers <= 1 || n < 2) {
        body(0U, std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t begin = std::min(n, w * chunk);
        std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([&body, w, begin, end] { body(w, begin, end); });
    }
    for (auto& t : pool) t.join();
}

inline std::uint32_t popcount_xor(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    std::uint32_t total = 0;
    for (std::size_t i = 0; i < words; ++i) total += static_cast<std::uint32_t>(std::popcount(a[i] ^ b[i]));
    return total;
}

}  // namespace cubecx::detail
