#include "haarfree/rmt/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "haarfree/rmt/matrix.hpp"

namespace haarfree::rmt {

namespace {
void require_hermitian(const ComplexMatrix& A, const char* who) {
    if (A.rows() != A.cols()) throw std::invalid_argument(std::string(who) + ": matrix is not square");
    if (!is_hermitian(A)) throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian");
}
}  // namespace

EigenDecomposition eig_hermitian(const ComplexMatrix& A) {
    require_hermitian(A, "eig_hermitian");
    const ComplexMatrix H = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H);
    if (es.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: no convergence");
    EigenDecomposition out{es.eigenvalues(), es.eigenvectors()};
    for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
        Eigen::Index k = 0;
        out.vectors.col(j).cwiseAbs2().maxCoeff(&k);
        const cplx v = out.vectors(k, j);
        if (std::abs(v) > 0) {
            out.vectors.col(j) *= std::conj(v) / std::abs(v);
            out.vectors(k, j) = std::abs(v);
        }
    }
    return out;
}

RealVector eigvals_hermitian(const ComplexMatrix& A) {
    require_hermitian(A, "eigvals_hermitian");
    const ComplexMatrix H = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigvals_hermitian: no convergence");
    return es.eigenvalues();
}

ComplexMatrix sharp_product(const ComplexMatrix& x, const ComplexMatrix& y, Eigen::Index M) {
    if (M < 1 || x.rows() != x.cols() || y.rows() != x.rows() || y.cols() != x.cols() || x.rows() % M != 0)
        throw std::invalid_argument("sharp_product: dimension mismatch");
    const Eigen::Index n = x.rows() / M;
    ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
    // block (u, s) of x # y is sum_k x_{ks} y_{uk}
    for (Eigen::Index u = 0; u < M; ++u)
        for (Eigen::Index s = 0; s < M; ++s)
            for (Eigen::Index k = 0; k < M; ++k)
                out.block(u * n, s * n, n, n).noalias() += x.block(k * n, s * n, n, n) * y.block(u * n, k * n, n, n);
    return out;
}

cplx resolvent_trace(const RealVector& eigenvalues, cplx z) {
    if (z.imag() == 0) throw std::invalid_argument("resolvent_trace: z must be off the real axis");
    if (eigenvalues.size() == 0) throw std::invalid_argument("resolvent_trace: empty spectrum");
    cplx s = 0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) s += 1.0 / (z - eigenvalues(i));
    return s / static_cast<double>(eigenvalues.size());
}

cplx resolvent_trace(const ComplexMatrix& A, cplx z) {
    if (z.imag() == 0) throw std::invalid_argument("resolvent_trace: z must be off the real axis");
    return resolvent_trace(eigvals_hermitian(A), z);
}

}  // namespace haarfree::rmt
