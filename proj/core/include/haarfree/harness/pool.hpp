#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "haarfree/rmt/random.hpp"

namespace haarfree::harness {

// Replicas are grouped in fixed blocks; replica k always draws from Philox(stream_seed, k)
// and blocks are merged in index order, so results do not depend on the thread count.
inline constexpr long kBlockSize = 64;

// fn(rng, replica_index, acc) adds one replica to acc. make() returns an empty accumulator.
template <class Acc, class Make, class Fn>
Acc run_replicas(long replicas, int threads, std::uint64_t stream_seed, Make make, Fn fn) {
    const long blocks = (replicas + kBlockSize - 1) / kBlockSize;
    std::vector<std::optional<Acc>> parts(static_cast<std::size_t>(blocks));
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const long b = next.fetch_add(1);
            if (b >= blocks) return;
            try {
                Acc acc = make();
                const long end = std::min(replicas, (b + 1) * kBlockSize);
                for (long k = b * kBlockSize; k < end; ++k) {
                    rmt::Philox rng(stream_seed, static_cast<std::uint64_t>(k));
                    fn(rng, k, acc);
                }
                parts[static_cast<std::size_t>(b)].emplace(std::move(acc));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next = blocks;
                return;
            }
        }
    };

    const int n = std::max(1, std::min<int>(threads, static_cast<int>(std::max<long>(blocks, 1))));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);

    Acc total = make();
    for (auto& part : parts) total.merge(*part);
    return total;
}

}  // namespace haarfree::harness
