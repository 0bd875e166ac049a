#include "bwl/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace bwl::par {

unsigned thread_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* cap = std::getenv("BWL_THREADS")) {
        try {
            const long v = std::stol(cap);
            if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
        } catch (...) {
            // unparseable cap: ignore
        }
    }
    return hw;
}

void for_each(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned tc = thread_count();
    if (tc <= 1 || n < 2048) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t per = (n + tc - 1) / tc;
    for (unsigned c = 0; c < tc; ++c) {
        pool.emplace_back([&, c] {
            const std::size_t lo = c * per;
            const std::size_t hi = std::min(n, lo + per);
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace bwl::par
