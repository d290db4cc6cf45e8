#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

// Deterministic batched parallel reduction. Work is split into fixed-size
// batches independent of the thread count; batch results are combined in
// batch order, so outputs are bit-identical for any --threads value.

namespace nlbm {

struct BatchSums {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t count = 0;
    void add(double x) {
        sum += x;
        sum_sq += x * x;
        count += 1;
    }
    void merge(const BatchSums& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        count += o.count;
    }
};

// body(i) -> double, for i in [0, n). Returns merged (sum, sum_sq, count).
template <class Body>
BatchSums parallel_mc(std::int64_t n, int threads, Body&& body,
                      std::int64_t batch_size = 256) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
    const std::int64_t n_batches = (n + batch_size - 1) / batch_size;
    std::vector<BatchSums> partial(static_cast<std::size_t>(n_batches));
    std::atomic<std::int64_t> next_batch{0};
    auto worker = [&]() {
        for (;;) {
            const std::int64_t b = next_batch.fetch_add(1);
            if (b >= n_batches) return;
            BatchSums acc;
            const std::int64_t lo = b * batch_size;
            const std::int64_t hi = std::min(n, lo + batch_size);
            for (std::int64_t i = lo; i < hi; ++i) acc.add(body(i));
            partial[static_cast<std::size_t>(b)] = acc;
        }
    };
    if (threads == 1 || n_batches == 1) {
        worker();
    } else {
        const int nw = static_cast<int>(std::min<std::int64_t>(threads, n_batches));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nw));
        for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    BatchSums total;
    for (const auto& p : partial) total.merge(p);
    return total;
}

}  // namespace nlbm
