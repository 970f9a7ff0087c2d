#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "haarfree/matrix_types.hpp"
#include "haarfree/rmt/random.hpp"

namespace haarfree::rmt {

// Ginibre matrix followed by QR, with column phases fixed by R_jj / |R_jj|.
ComplexMatrix sample_haar_unitary(Eigen::Index N, Philox& rng);

// Increment of the Hermitian Brownian motion over time h: diagonal entries N(0, h/N),
// off-diagonal real and imaginary parts N(0, h/(2N)).
ComplexMatrix hermitian_bm_increment(Eigen::Index N, double h, Philox& rng);

struct Provenance {
    std::string origin;  // "identity", "haar", "ubm", ...
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    double t = 0;
    double h = 0;
    long steps = 0;
};

struct UnitaryTuple {
    std::vector<ComplexMatrix> members;
    Provenance provenance;

    std::size_t size() const { return members.size(); }
    Eigen::Index dim() const { return members.empty() ? 0 : members[0].rows(); }
};

UnitaryTuple identity_tuple(std::size_t p, Eigen::Index N);
UnitaryTuple haar_tuple(std::size_t p, Eigen::Index N, std::uint64_t seed, std::uint64_t stream = 0);

// One step U <- U exp(i dX).
void ubm_step(ComplexMatrix& U, double h, Philox& rng);

// Multiplicative exponential scheme for dU = i U dX - U dt / 2 on every member.
// Steps of size t / steps; t = 0 returns U0 unchanged.
UnitaryTuple ubm_trajectory(const UnitaryTuple& U0, double t, long steps, Philox& rng);

// Same scheme, invoking observe(step, time, U) after every step.
void ubm_path(ComplexMatrix& U, double t, long steps, Philox& rng,
              const std::function<void(long, double, const ComplexMatrix&)>& observe);

}  // namespace haarfree::rmt
