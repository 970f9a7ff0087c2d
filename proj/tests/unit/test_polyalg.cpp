#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "haarfree/polyalg/derivatives.hpp"
#include "haarfree/polyalg/evaluation.hpp"
#include "haarfree/polyalg/polynomial.hpp"
#include "haarfree/rmt/ensembles.hpp"
#include "haarfree/rmt/matrix.hpp"
#include "support/leibniz_oracle.hpp"
#include "support/random_poly.hpp"

using namespace haarfree;
using namespace haarfree::poly;
using cd = std::complex<double>;

namespace {

const Alphabet A2(2, 2);

Polynomial Y(int i, bool star = false, Alphabet a = A2) { return Polynomial::letter(a, i, star); }

Tensor simple(const Polynomial& a, const Polynomial& b) { return Tensor::simple(a, b); }

ComplexMatrix random_hermitian(std::mt19937_64& g, int n, double scale) {
    std::normal_distribution<double> d(0, 1);
    ComplexMatrix G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = {d(g), d(g)};
    ComplexMatrix H = G + G.adjoint();
    return H * (scale / rmt::operator_norm(H));
}

}  // namespace

TEST(Multiply, Examples) {
    const Polynomial p = Y(1) * Y(1, true);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p.terms().begin()->first.degree(), 2u);
    EXPECT_EQ(p * Polynomial::one(A2), p);
    EXPECT_EQ((Y(1) + Y(2)) * Y(1, true), Y(1) * Y(1, true) + Y(2) * Y(1, true));
}

TEST(Multiply, AlphabetMismatchThrows) {
    EXPECT_THROW(Y(1) * Polynomial::letter(Alphabet(3, 1), 1), std::invalid_argument);
}

TEST(Multiply, Associative) {
    std::mt19937_64 g(1);
    for (int r = 0; r < 50; ++r) {
        auto a = testsupport::random_exact(g, A2, 3, 3), b = testsupport::random_exact(g, A2, 3, 3),
             c = testsupport::random_exact(g, A2, 3, 3);
        EXPECT_EQ((a * b) * c, a * (b * c));
    }
}

TEST(Adjoint, Examples) {
    const Polynomial p = Y(1) * Y(2) * cd(0, 2);
    EXPECT_EQ(p.adjoint(), Y(2, true) * Y(1, true) * cd(0, -2));
    EXPECT_EQ((Y(1) + Y(1, true)).adjoint(), Y(1) + Y(1, true));
    EXPECT_EQ(Polynomial::one(A2).adjoint(), Polynomial::one(A2));
}

TEST(Adjoint, InvolutionAndAntiMultiplicative) {
    std::mt19937_64 g(2);
    for (int r = 0; r < 100; ++r) {
        auto a = testsupport::random_exact(g, A2, 4, 4), b = testsupport::random_exact(g, A2, 4, 4);
        EXPECT_EQ(a.adjoint().adjoint(), a);
        EXPECT_EQ((a * b).adjoint(), b.adjoint() * a.adjoint());
    }
}

TEST(NormA, Examples) {
    const Polynomial p = Y(1) * Y(2) * cd(2) + Y(1);
    EXPECT_DOUBLE_EQ(norm_A(p, 3), 21);
    EXPECT_DOUBLE_EQ(norm_A(Polynomial(A2), 3), 0);
    EXPECT_DOUBLE_EQ(norm_A(Polynomial::one(A2), 7.5), 1);
    EXPECT_THROW(norm_A(p, -1), std::invalid_argument);
}

TEST(NormA, SubmultiplicativeAndTriangle) {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> u(0, 3);
    for (int r = 0; r < 500; ++r) {
        auto a = testsupport::random_poly(g, A2, 4, 4), b = testsupport::random_poly(g, A2, 4, 4);
        const double A = u(g);
        EXPECT_LE(norm_A(a * b, A), norm_A(a, A) * norm_A(b, A) * (1 + 1e-12));
        EXPECT_LE(norm_A(a + b, A), (norm_A(a, A) + norm_A(b, A)) * (1 + 1e-12));
    }
}

TEST(Partial, Examples) {
    EXPECT_EQ(partial(Y(1) * Y(2), 1), simple(Polynomial::one(A2), Y(2)));
    EXPECT_TRUE(partial(Y(1, true), 1).is_zero());
    EXPECT_EQ(partial(Y(1) * Y(1), 1), simple(Polynomial::one(A2), Y(1)) + simple(Y(1), Polynomial::one(A2)));
    EXPECT_EQ(partial(Y(1, true), 1, true), simple(Polynomial::one(A2), Polynomial::one(A2)));
}

TEST(Delta, Examples) {
    EXPECT_EQ(delta(Y(1), 1), simple(Y(1), Polynomial::one(A2)));
    EXPECT_EQ(delta(Y(1, true), 1), simple(Polynomial::one(A2), Y(1, true)) * Tensor::simple(
                                         Polynomial::constant(A2, -1), Polynomial::one(A2)));
    EXPECT_TRUE(delta(Y(1) * Y(1, true), 1).is_zero());
    EXPECT_THROW(delta(Polynomial::letter(Alphabet(2, 1), 2), 2), std::out_of_range);
}

TEST(CyclicDerivative, Examples) {
    for (unsigned n = 1; n <= 6; ++n) {
        const Polynomial p = power(Y(1), n);
        EXPECT_EQ(cyclic_derivative(p, 1, CyclicFlavor::Script), p * cd(n)) << n;
    }
    EXPECT_EQ(cyclic_derivative(Y(1) * Y(2), 1, CyclicFlavor::D), Y(2));
    EXPECT_TRUE(cyclic_derivative(Y(2), 1, CyclicFlavor::Script).is_zero());
}

TEST(Derivatives, MatchRecursiveLeibnizAndProductRule) {
    std::mt19937_64 g(4);
    const Alphabet a(3, 2);
    for (int r = 0; r < 200; ++r) {
        auto P = testsupport::random_exact(g, a, 4, 4), Q = testsupport::random_exact(g, a, 4, 4);
        const auto one = ExactPolynomial::one(a);
        for (int i = 1; i <= 3; ++i) {
            EXPECT_EQ(partial(P, i), testsupport::leibniz_oracle(P, i, 0));
            EXPECT_EQ(partial(P, i, true), testsupport::leibniz_oracle(P, i, 1));
            EXPECT_EQ(partial(P * Q, i),
                      partial(P, i) * ExactTensor::simple(one, Q) + ExactTensor::simple(P, one) * partial(Q, i));
        }
        for (int i = 1; i <= 2; ++i) {
            EXPECT_EQ(delta(P, i), testsupport::leibniz_oracle(P, i, 2));
            EXPECT_EQ(delta(P * Q, i),
                      delta(P, i) * ExactTensor::simple(one, Q) + ExactTensor::simple(P, one) * delta(Q, i));
        }
    }
}

TEST(Delta, UnitarityCompatibility) {
    std::mt19937_64 g(5);
    rmt::Philox rng(5);
    const Alphabet a(3, 2);
    MatrixTuple X = {rmt::sample_haar_unitary(4, rng), rmt::sample_haar_unitary(4, rng),
                     rmt::sample_haar_unitary(4, rng)};
    for (int r = 0; r < 50; ++r) {
        const Monomial q = testsupport::random_monomial(g, a, 3), s = testsupport::random_monomial(g, a, 3);
        for (int i = 1; i <= 2; ++i) {
            const Monomial cancel({Letter(a, i, false), Letter(a, i, true)});
            const Polynomial with = Polynomial::monomial(a, q * cancel * s, 1.0);
            const Polynomial without = Polynomial::monomial(a, q * s, 1.0);
            for (int j = 1; j <= 2; ++j) {
                const ComplexMatrix lhs = evaluate(delta(with, j), X).dense();
                const ComplexMatrix rhs = evaluate(delta(without, j), X).dense();
                EXPECT_LE((lhs - rhs).norm(), 1e-12 * (1 + rhs.norm()));
            }
        }
    }
}

TEST(TensorApply, Examples) {
    EvaluatedTensor t;
    t.dim = 2;
    t.terms.push_back({1.0, ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)});
    EXPECT_TRUE(tensor_apply(t, ComplexMatrix::Identity(2, 2), ContractionMode::Sharp).isIdentity());

    ComplexMatrix A = ComplexMatrix::Zero(2, 2), B = ComplexMatrix::Zero(2, 2);
    A.diagonal() << 1, 2;
    B.diagonal() << 3, 4;
    t.terms = {{1.0, A, B}};
    ComplexMatrix expect = ComplexMatrix::Zero(2, 2);
    expect.diagonal() << 3, 8;
    EXPECT_TRUE(tensor_apply(t, ComplexMatrix::Identity(2, 2), ContractionMode::Sharp).isApprox(expect));

    ComplexMatrix E12 = ComplexMatrix::Zero(2, 2), E21 = ComplexMatrix::Zero(2, 2), E22 = ComplexMatrix::Zero(2, 2);
    E12(0, 1) = 1;
    E21(1, 0) = 1;
    E22(1, 1) = 1;
    t.terms = {{1.0, E12, E21}};
    EXPECT_TRUE(tensor_apply(t, ContractionMode::Multiply).isApprox(E22));
    EXPECT_TRUE(tensor_apply(t, ContractionMode::BoxTimes).isApprox(E12 * E21));
    EXPECT_THROW(tensor_apply(t, ComplexMatrix::Identity(3, 3), ContractionMode::Sharp), std::invalid_argument);
}

TEST(TensorApply, SharpTildeAndMultiplyOutAgree) {
    std::mt19937_64 g(6);
    rmt::Philox rng(6);
    MatrixTuple X = {rmt::sample_haar_unitary(3, rng), rmt::sample_haar_unitary(3, rng)};
    for (int r = 0; r < 20; ++r) {
        const Polynomial P = testsupport::random_poly(g, A2, 3, 4);
        const Tensor d = delta(P, 1);
        const auto e = evaluate(d, X);
        // m o delta evaluated equals the script cyclic derivative evaluated
        EXPECT_LE((tensor_apply(e, ContractionMode::Multiply) - evaluate(d.multiply_out(), X)).norm(), 1e-10);
        EXPECT_LE((tensor_apply(e, ComplexMatrix::Identity(3, 3), ContractionMode::SharpTilde) -
                   tensor_apply(e, ContractionMode::Multiply))
                      .norm(),
                  1e-10);
    }
}

TEST(Evaluate, Examples) {
    rmt::Philox rng(7);
    const Alphabet a1(1, 1);
    MatrixTuple X = {rmt::sample_haar_unitary(5, rng)};
    EXPECT_TRUE(evaluate(Polynomial::letter(a1, 1) * Polynomial::letter(a1, 1, true), X)
                    .isApprox(ComplexMatrix::Identity(5, 5), 1e-12));
    ComplexMatrix D = ComplexMatrix::Zero(2, 2);
    D.diagonal() << cd(0, 1), cd(0, -1);
    EXPECT_LE(evaluate(Polynomial::letter(a1, 1) + Polynomial::letter(a1, 1, true), {D}).norm(), 1e-15);
    EXPECT_THROW(evaluate(Polynomial::letter(a1, 1), MatrixTuple{D, D}), std::invalid_argument);
    EXPECT_THROW(evaluate(Y(1), MatrixTuple{D, ComplexMatrix::Identity(3, 3)}), std::invalid_argument);
}

TEST(Evaluate, StarHomomorphism) {
    std::mt19937_64 g(8);
    std::normal_distribution<double> nd(0, 1);
    const Alphabet a(3, 2);
    for (int r = 0; r < 50; ++r) {
        MatrixTuple X;
        for (int k = 0; k < 3; ++k) {
            ComplexMatrix M(4, 4);
            for (int i = 0; i < 16; ++i) M(i % 4, i / 4) = {nd(g), nd(g)};
            X.push_back(M);
        }
        const Polynomial P = testsupport::random_poly(g, a, 4, 3), Q = testsupport::random_poly(g, a, 4, 3);
        const ComplexMatrix PX = evaluate(P, X), QX = evaluate(Q, X);
        EXPECT_LE((evaluate(P.adjoint(), X) - PX.adjoint()).norm(), 1e-10 * (1 + PX.norm()));
        EXPECT_LE((evaluate(P * Q, X) - PX * QX).norm(), 1e-10 * (1 + PX.norm() * QX.norm()));
        const ComplexMatrix S = evaluate(P + P.adjoint(), X);
        EXPECT_LE((S - S.adjoint()).norm(), 1e-12 * (1 + S.norm()));
    }
}

TEST(DeltaExp, ZeroAndScalar) {
    const Alphabet a1(1, 1);
    MatrixTuple X = {ComplexMatrix::Constant(1, 1, cd(0.3, -0.7))};
    EXPECT_TRUE(delta_exp_evaluate(Polynomial(a1), 1, X).empty());
    const cd u = X[0](0, 0);
    const auto t = delta_exp_evaluate(Polynomial::letter(a1, 1), 1, X);
    EXPECT_LE(std::abs(t.dense()(0, 0) - u * std::exp(u)), 1e-14);
    EXPECT_THROW(delta_exp_evaluate(Polynomial::letter(a1, 1), 1, X, 1), std::invalid_argument);
}

TEST(DeltaExp, MatchesSeries) {
    std::mt19937_64 g(9);
    for (int r = 0; r < 10; ++r) {
        MatrixTuple X = {random_hermitian(g, 4, 1.0), random_hermitian(g, 4, 1.0)};
        X[0] = expi_hermitian(X[0]);  // unitary letter
        Polynomial P = testsupport::random_poly(g, A2, 3, 3);
        const double nrm = rmt::operator_norm(evaluate(P, X));
        P *= cd(std::min(1.0, 4.0 / nrm));
        const ComplexMatrix PX = evaluate(P, X);
        const auto dP = evaluate(delta(P, 1), X);
        // sum_k 1/k! sum_j (P^j A) (x) (B P^{k-1-j})
        ComplexMatrix series = ComplexMatrix::Zero(16, 16);
        std::vector<ComplexMatrix> pw = {ComplexMatrix::Identity(4, 4)};
        for (int k = 1; k <= 60; ++k) pw.push_back(pw.back() * PX);
        double fact = 1;
        for (int k = 1; k <= 60; ++k) {
            fact *= k;
            EvaluatedTensor term;
            term.dim = 4;
            for (int j = 0; j < k; ++j)
                for (const auto& t : dP.terms) term.terms.push_back({t.coef / fact, pw[j] * t.left, t.right * pw[k - 1 - j]});
            series += term.dense();
        }
        const ComplexMatrix duhamel = delta_exp_evaluate(P, 1, X).dense();
        EXPECT_LE((duhamel - series).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(Quadrature, GaussLegendreExactForPolynomials) {
    for (int n : {2, 5, 16, 64}) {
        const auto q = gauss_legendre_unit(n);
        double s = 0;
        for (std::size_t j = 0; j < q.nodes.size(); ++j) s += q.weights[j] * std::pow(q.nodes[j], 2 * n - 1);
        EXPECT_NEAR(s, 1.0 / (2 * n), 1e-14) << n;
    }
}

TEST(Expm, HermitianExponentialIsUnitaryAndMatchesPade) {
    std::mt19937_64 g(10);
    const ComplexMatrix H = random_hermitian(g, 6, 3.0);
    const ComplexMatrix U = expi_hermitian(H);
    EXPECT_LE(rmt::unitarity_defect(U), 1e-13);
    EXPECT_LE((U - expm(cd(0, 1) * H)).norm(), 1e-11);
}

TEST(TraceEvaluator, MatchesDirectEvaluation) {
    std::mt19937_64 g(11);
    rmt::Philox rng(11);
    MatrixTuple X = {rmt::sample_haar_unitary(6, rng), rmt::sample_haar_unitary(6, rng)};
    TraceEvaluator te(A2, X);
    for (int r = 0; r < 30; ++r) {
        const Polynomial P = testsupport::random_poly(g, A2, 5, 5);
        EXPECT_LE(std::abs(te.trace(P) - evaluate(P, X).trace()), 1e-10);
    }
}

TEST(ReduceUnitary, CancelsAdjacentPairs) {
    const Polynomial p = Y(1) * Y(2) * Y(2, true) * Y(1, true) + Y(2);
    EXPECT_EQ(reduce_unitary(p), Polynomial::one(A2) + Y(2));
    const Alphabet a(2, 1);
    const Polynomial z = Polynomial::letter(a, 2) * Polynomial::letter(a, 2, true);
    EXPECT_EQ(reduce_unitary(z), z);
}
