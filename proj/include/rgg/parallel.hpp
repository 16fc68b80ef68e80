#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rgg {

/// Streaming mean/variance (Welford), mergeable with Chan's update.
struct Moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) noexcept {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const Moments& o) noexcept {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double n_a = static_cast<double>(count);
        const double n_b = static_cast<double>(o.count);
        const double n = n_a + n_b;
        const double delta = o.mean - mean;
        mean += delta * n_b / n;
        m2 += o.m2 + delta * delta * n_a * n_b / n;
        count += o.count;
    }

    /// Unbiased sample variance; 0 for fewer than two samples.
    double variance() const noexcept { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double se() const noexcept { return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0; }
};

/// Runs body(i) for i in [0, count) on up to `workers` threads. Work is handed
/// out in index order; the first exception thrown is rethrown on the caller.
template <class Body>
void parallel_for_index(std::uint64_t count, int workers, Body&& body) {
    const auto threads = static_cast<std::uint64_t>(std::max(1, workers));
    if (threads == 1 || count < 2) {
        for (std::uint64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::uint64_t spawn = std::min(threads, count);
    pool.reserve(spawn);
    for (std::uint64_t t = 0; t < spawn; ++t) pool.emplace_back(run);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

inline constexpr std::uint64_t kReplicateChunk = 1024;

/// Moments of value_of(r) over r in [0, reps). Chunks of fixed size are
/// reduced in index order, so the result is bit-identical for any worker count.
template <class ValueOf>
Moments accumulate_replicates(std::uint64_t reps, int workers, ValueOf&& value_of) {
    const std::uint64_t chunks = (reps + kReplicateChunk - 1) / kReplicateChunk;
    std::vector<Moments> partial(chunks);
    parallel_for_index(chunks, workers, [&](std::uint64_t c) {
        const std::uint64_t begin = c * kReplicateChunk;
        const std::uint64_t end = std::min(reps, begin + kReplicateChunk);
        Moments m;
        for (std::uint64_t r = begin; r < end; ++r) m.add(value_of(r));
        partial[c] = m;
    });
    Moments total;
    for (const auto& m : partial) total.merge(m);
    return total;
}

/// value_of(r) for every r in [0, reps), in index order.
template <class ValueOf>
std::vector<double> collect_replicates(std::uint64_t reps, int workers, ValueOf&& value_of) {
    std::vector<double> out(reps);
    const std::uint64_t chunks = (reps + kReplicateChunk - 1) / kReplicateChunk;
    parallel_for_index(chunks, workers, [&](std::uint64_t c) {
        const std::uint64_t begin = c * kReplicateChunk;
        const std::uint64_t end = std::min(reps, begin + kReplicateChunk);
        for (std::uint64_t r = begin; r < end; ++r) out[r] = value_of(r);
    });
    return out;
}

}  // namespace rgg
