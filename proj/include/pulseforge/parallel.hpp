#pragma once

// Minimal fork-join helper. Work items must be independent; the helper only
// splits an index range across a fixed pool of std::threads.

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace pulseforge {

/// Worker cap: explicit argument, else PULSEFORGE_THREADS, else hardware.
inline unsigned resolve_thread_count(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PULSEFORGE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1u;
}

/// Run body(i) for i in [0, n) across at most `threads` workers. Falls back
/// to a plain loop when one worker suffices.
template <class Body>
void parallel_for(std::size_t n, const Body& body, unsigned threads = 0) {
    const unsigned workers = std::min<std::size_t>(resolve_thread_count(threads), n ? n : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = n * w / workers;
        const std::size_t hi = n * (w + 1) / workers;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace pulseforge
