#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "haarfree/matrix_types.hpp"
#include "haarfree/polyalg/polynomial.hpp"

namespace haarfree::poly {

using MatrixTuple = std::vector<ComplexMatrix>;

// Evaluation of a tensor element: a finite sum of coef * left (x) right.
struct EvaluatedTensor {
    struct Term {
        cplx coef;
        ComplexMatrix left;
        ComplexMatrix right;
    };
    std::vector<Term> terms;
    Eigen::Index dim = 0;

    // Matrix of size dim^2 under the identification E_ij (x) E_rs -> E_{i + r dim, j + s dim}.
    ComplexMatrix dense() const;
    bool empty() const { return terms.empty(); }
};

enum class ContractionMode {
    Sharp,       // (A (x) B) # C = A C B
    SharpTilde,  // (A (x) B) #~ C = B C A
    Multiply,    // m(A (x) B) = B A
    BoxTimes     // A (x) B -> A B
};

// Checks dimensions and returns the common matrix size.
Eigen::Index check_tuple(const Alphabet& a, const MatrixTuple& X);

ComplexMatrix evaluate(const Monomial& m, const MatrixTuple& X);
ComplexMatrix evaluate(const Polynomial& P, const MatrixTuple& X);

// Left factors evaluated at X, right factors at Y.
EvaluatedTensor evaluate(const Tensor& T, const MatrixTuple& X, const MatrixTuple& Y);
inline EvaluatedTensor evaluate(const Tensor& T, const MatrixTuple& X) { return evaluate(T, X, X); }

// C is ignored for Multiply and BoxTimes.
ComplexMatrix tensor_apply(const EvaluatedTensor& T, const ComplexMatrix& C, ContractionMode mode);
ComplexMatrix tensor_apply(const EvaluatedTensor& T, ContractionMode mode);

// Integral over [0,1] of e^{aP} delta_i P e^{(1-a)P} evaluated at X, with the convention
// A x (B (x) C) x D = AB (x) CD, by Gauss-Legendre quadrature.
EvaluatedTensor delta_exp_evaluate(const Polynomial& P, int i, const MatrixTuple& X,
                                   int quadrature_nodes = 64);

// Nodes and weights on [0, 1].
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Quadrature gauss_legendre_unit(int n);

// Scaling and squaring with a degree-13 Pade approximant.
ComplexMatrix expm(const ComplexMatrix& A);
// exp(i s H) for Hermitian H, through its eigendecomposition; exactly unitary up to rounding.
ComplexMatrix expi_hermitian(const ComplexMatrix& H, double s = 1.0);

// Traces of many monomials at one fixed evaluation point. Word products are memoized
// by splitting each word in halves, so shared sub-words are multiplied only once.
class TraceEvaluator {
public:
    TraceEvaluator(const Alphabet& a, MatrixTuple X);

    const ComplexMatrix& product(const Monomial& m);
    cplx trace(const Monomial& m);
    cplx trace(const Polynomial& P);
    Eigen::Index dim() const { return n_; }

private:
    Alphabet alphabet_;
    MatrixTuple X_, Xstar_;
    Eigen::Index n_;
    std::map<Monomial, ComplexMatrix> products_;
};

}  // namespace haarfree::poly
