#ifndef BWL_PARALLEL_HPP
#define BWL_PARALLEL_HPP

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace bwl::par {

/// Worker count: hardware concurrency capped by the BWL_THREADS env var.
unsigned thread_count();

/// Chunked parallel reduction over [0, n). Each worker folds its chunk with
/// `fold(acc, i)`; chunk results are merged left-to-right with `join`, so the
/// result is deterministic whenever join is associative over the chunk order
/// (max-reductions with a total-order tie break qualify).
template <class Acc, class Fold, class Join>
Acc reduce(std::size_t n, Acc init, Fold fold, Join join) {
    const unsigned tc = thread_count();
    if (n == 0) return init;
    if (tc <= 1 || n < 4096) {
        Acc acc = init;
        for (std::size_t i = 0; i < n; ++i) acc = fold(acc, i);
        return acc;
    }
    const std::size_t chunks = tc;
    std::vector<Acc> partial(chunks, init);
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    const std::size_t per = (n + chunks - 1) / chunks;
    for (std::size_t c = 0; c < chunks; ++c) {
        pool.emplace_back([&, c] {
            const std::size_t lo = c * per;
            const std::size_t hi = std::min(n, lo + per);
            Acc acc = init;
            for (std::size_t i = lo; i < hi; ++i) acc = fold(acc, i);
            partial[c] = acc;
        });
    }
    for (auto& t : pool) t.join();
    Acc acc = init;
    for (std::size_t c = 0; c < chunks; ++c) acc = join(acc, partial[c]);
    return acc;
}

/// Parallel for over [0, n).
void for_each(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace bwl::par

#endif
