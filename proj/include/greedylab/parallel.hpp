#pragma once
// Thread-count policy and a static-partition parallel loop.

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace greedylab {

/// Worker count: GREEDYLAB_THREADS when set to a positive integer, else the hardware count.
inline unsigned thread_count()
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GREEDYLAB_THREADS")) {
        try {
            int v = std::stoi(env);
            if (v > 0) return std::min<unsigned>(static_cast<unsigned>(v), std::max(hw, 1u) * 4);
        } catch (const std::exception&) {
        }
    }
    return hw;
}

/**
 * Runs body(chunk, begin, end) over contiguous ranges of [0, n). Chunk c always
 * covers the same range for a given (n, chunks), so per-chunk results reduced
 * in chunk order are independent of scheduling.
 */
template <class Body>
void parallel_chunks(std::size_t n, std::size_t chunks, Body&& body)
{
    chunks = std::max<std::size_t>(1, std::min(chunks, n));
    auto range = [&](std::size_t c) {
        return std::pair{n * c / chunks, n * (c + 1) / chunks};
    };
    unsigned workers = std::min<unsigned>(thread_count(), static_cast<unsigned>(chunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            auto [b, e] = range(c);
            body(c, b, e);
        }
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t c = w; c < chunks; c += workers) {
                auto [b, e] = range(c);
                body(c, b, e);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace greedylab
