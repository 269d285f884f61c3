#include "wavesplat/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace wavesplat {

namespace {
std::atomic<int> g_thread_cap{0};
}

void set_parallelism(int threads) {
    g_thread_cap.store(threads < 0 ? 0 : threads);
}

int effective_parallelism() {
    const int cap = g_thread_cap.load();
    if (cap > 0) return cap;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& body) {
    if (begin >= end) return;
    const std::size_t n = end - begin;
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(effective_parallelism()), n);
    if (workers <= 1) {
        body(begin, end);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = begin + w * chunk;
        const std::size_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

} // namespace wavesplat
