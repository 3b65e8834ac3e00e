#include "dpp/parallel.hpp"

#include <atomic>
#include <cmath>
#include <limits>

namespace dpp {

namespace {
int g_threads = 1;
constexpr std::size_t kChunks = 128; // fixed, independent of thread count
} // namespace

void set_thread_count(int n) { g_threads = n < 1 ? 1 : n; }
int thread_count() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
    if (n == 0) return;
    const std::size_t chunk = (n + kChunks - 1) / kChunks;
    const std::size_t nchunks = (n + chunk - 1) / chunk;
    if (g_threads == 1 || nchunks == 1) {
        for (std::size_t c = 0; c < nchunks; ++c)
            chunk_fn(c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= nchunks) return;
            chunk_fn(c * chunk, std::min(n, (c + 1) * chunk));
        }
    };
    std::vector<std::thread> pool;
    const int nt = std::min<int>(g_threads, static_cast<int>(nchunks));
    pool.reserve(static_cast<std::size_t>(nt - 1));
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

double parallel_max(std::size_t n, const std::function<double(std::size_t)>& fn) {
    if (n == 0) return 0.0;
    const std::size_t chunk = (n + kChunks - 1) / kChunks;
    const std::size_t nchunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(nchunks, -std::numeric_limits<double>::infinity());
    parallel_for(n, [&](std::size_t b, std::size_t e) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = b; i < e; ++i) best = std::max(best, fn(i));
        partial[b / chunk] = best;
    });
    double best = partial[0];
    for (double v : partial) best = std::max(best, v);
    return best;
}

} // namespace dpp
