#include "vortex/parallel.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>
#include <vector>

namespace vortex {

namespace {
std::atomic<int> g_workers{1};
}

void set_worker_count(int workers) {
    if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
    g_workers.store(workers, std::memory_order_relaxed);
}

int worker_count() { return g_workers.load(std::memory_order_relaxed); }

void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    const std::size_t w = static_cast<std::size_t>(worker_count());
    if (n == 0) return;
    if (w <= 1 || n < 2 * w) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(w - 1);
    for (std::size_t k = 1; k < w; ++k) {
        const std::size_t b = n * k / w;
        const std::size_t e = n * (k + 1) / w;
        pool.emplace_back(fn, b, e);
    }
    fn(0, n / w);
    for (auto& t : pool) t.join();
}

} // namespace vortex
