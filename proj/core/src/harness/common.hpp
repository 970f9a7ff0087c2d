#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "haarfree/freelimit/moment_engine.hpp"
#include "haarfree/harness/config.hpp"
#include "haarfree/harness/recipes.hpp"
#include "haarfree/polyalg/evaluation.hpp"
#include "haarfree/rmt/random.hpp"

namespace haarfree::harness::detail {

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Seed of the replica stream for one (experiment tag, N index) pair.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
    return rmt::derive_seed(rmt::derive_seed(seed, tag), index);
}

enum Tag : std::uint64_t {
    kScaling = 1,
    kStieltjes,
    kDlu,
    kVarianceLhs,
    kVarianceRhs,
    kConcentration,
    kStrong,
    kIdentity,
    kDuhamel
};

void require_self_adjoint(const poly::Polynomial& P, const char* who);

freelim::AlphabetAssignment assignment_for(const ExperimentConfig& c, const std::vector<ComplexMatrix>& Z);

std::vector<ComplexMatrix> haar_unitaries(int p, Eigen::Index N, rmt::Philox& rng);

// Eigenvalues of P(U (x) I_M, Z), which must be Hermitian.
RealVector sample_spectrum(const poly::Polynomial& P, const std::vector<ComplexMatrix>& U, Eigen::Index M,
                           const std::vector<ComplexMatrix>& Z);

std::string fmt(double x);
std::string fmt_complex(cplx z);

}  // namespace haarfree::harness::detail
