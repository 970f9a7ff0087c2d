#include "common.hpp"

#include <charconv>
#include <stdexcept>

#include "haarfree/freelimit/spectral.hpp"
#include "haarfree/rmt/ensembles.hpp"
#include "haarfree/rmt/spectral.hpp"

namespace haarfree::harness::detail {

void require_self_adjoint(const poly::Polynomial& P, const char* who) {
    if (!freelim::is_self_adjoint(P)) throw std::invalid_argument(std::string(who) + ": polynomial must be self-adjoint");
}

freelim::AlphabetAssignment assignment_for(const ExperimentConfig& c, const std::vector<ComplexMatrix>& Z) {
    auto a = freelim::AlphabetAssignment::haar(static_cast<std::size_t>(c.p));
    if (!Z.empty()) a.with_matrices(Z, c.M);
    return a;
}

std::vector<ComplexMatrix> haar_unitaries(int p, Eigen::Index N, rmt::Philox& rng) {
    std::vector<ComplexMatrix> U;
    U.reserve(static_cast<std::size_t>(p));
    for (int k = 0; k < p; ++k) U.push_back(rmt::sample_haar_unitary(N, rng));
    return U;
}

RealVector sample_spectrum(const poly::Polynomial& P, const std::vector<ComplexMatrix>& U, Eigen::Index M,
                           const std::vector<ComplexMatrix>& Z) {
    const ComplexMatrix H = poly::evaluate(P, amplified_tuple(U, M, Z));
    // symmetrize away rounding before the Hermitian solver
    return rmt::eigvals_hermitian(0.5 * (H + H.adjoint()));
}

std::string fmt(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string fmt_complex(cplx z) {
    std::string s = fmt(z.real());
    if (z.imag() >= 0) s += '+';
    return s + fmt(z.imag()) + "i";
}

}  // namespace haarfree::harness::detail
