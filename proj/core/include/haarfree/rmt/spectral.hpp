#pragma once

#include <vector>

#include "haarfree/matrix_types.hpp"

namespace haarfree::rmt {

struct EigenDecomposition {
    RealVector values;     // ascending
    ComplexMatrix vectors;  // columns; largest-magnitude entry of each is real positive
};

// Throws std::invalid_argument for non-Hermitian input.
EigenDecomposition eig_hermitian(const ComplexMatrix& A);
RealVector eigvals_hermitian(const ComplexMatrix& A);

// Twisted product on M_n (x) M_M realized as nM x nM matrices (outer index is the M_M factor):
// (A1 (x) B1) # (A2 (x) B2) = A1 A2 (x) B2 B1.
ComplexMatrix sharp_product(const ComplexMatrix& x, const ComplexMatrix& y, Eigen::Index M);

// (1/n) sum_i 1/(z - lambda_i). Throws for real z.
cplx resolvent_trace(const ComplexMatrix& A, cplx z);
cplx resolvent_trace(const RealVector& eigenvalues, cplx z);

}  // namespace haarfree::rmt
