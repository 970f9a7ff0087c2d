#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "haarfree/matrix_types.hpp"

namespace haarfree::rmt {

// Counter-based Philox4x32-10 generator. A (seed, stream) pair fully determines the
// output sequence, which makes replicas reproducible independently of scheduling.
class Philox {
public:
    using result_type = std::uint32_t;

    explicit Philox(std::uint64_t seed = 0, std::uint64_t stream = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    std::uint64_t next_u64();
    // Uniform on (0, 1), never exactly 0 or 1.
    double uniform();
    double normal();
    // Standard complex Gaussian: real and imaginary parts N(0, 1/2).
    cplx complex_normal();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    void refill();

    std::uint64_t seed_, stream_;
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_{};
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0;
};

// Mixes a parent seed with a replica index into an independent child seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace haarfree::rmt
