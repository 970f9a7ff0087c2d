#pragma once

#include <iosfwd>
#include <string>

#include "haarfree/matrix_types.hpp"

namespace haarfree::rmt {

// Kronecker product under the identification M_n (x) M_k = M_{kn} that sends
// E_ij (x) E_rs to E_{i + rn, j + sn}.
ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B);

// Default tolerance is 1e-12 * n.
bool is_hermitian(const ComplexMatrix& A, double tol = -1);
bool is_unitary(const ComplexMatrix& A, double tol = -1);
double unitarity_defect(const ComplexMatrix& A);  // ||A*A - I||_F

double operator_norm(const ComplexMatrix& A);

// Binary layout: "HFMX", uint32 version, uint64 rows, uint64 cols, then row-major
// (re, im) pairs as little-endian doubles.
void write_binary(std::ostream& os, const ComplexMatrix& A);
ComplexMatrix read_binary(std::istream& is);
// {"rows": r, "cols": c, "data": [re, im, ...]} in row-major order.
std::string to_json(const ComplexMatrix& A);
ComplexMatrix from_json(const std::string& text);

}  // namespace haarfree::rmt
