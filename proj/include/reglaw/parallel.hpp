#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace reglaw {

// Splits [0, n) into contiguous chunks. Body must write only to slots indexed
// by i, so results never depend on the worker count.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t)>& body) {
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::thread> pool;
    pool.reserve(w);
    std::size_t chunk = (n + w - 1) / w;
    for (std::size_t t = 0; t < w; ++t) {
        std::size_t b = t * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, b, e] {
            for (std::size_t i = b; i < e; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Process-wide default used by the pipelines; set once by the CLI.
int& default_workers();

} // namespace reglaw
