#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "haarfree/rmt/ensembles.hpp"
#include "haarfree/rmt/matrix.hpp"
#include "haarfree/rmt/measure.hpp"
#include "haarfree/rmt/random.hpp"
#include "haarfree/rmt/spectral.hpp"

using namespace haarfree;
using namespace haarfree::rmt;
using cd = std::complex<double>;

namespace {

ComplexMatrix random_matrix(Philox& rng, Eigen::Index n) {
    ComplexMatrix A(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) A(i, j) = rng.complex_normal();
    return A;
}

ComplexMatrix random_hermitian(Philox& rng, Eigen::Index n) {
    const ComplexMatrix A = random_matrix(rng, n);
    return A + A.adjoint();
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

}  // namespace

TEST(Philox, DeterministicAndStreamSeparated) {
    Philox a(42, 7), b(42, 7), c(42, 8);
    bool differs = false;
    for (int k = 0; k < 100; ++k) {
        const auto x = a(), y = b(), z = c();
        EXPECT_EQ(x, y);
        differs |= x != z;
    }
    EXPECT_TRUE(differs);
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Philox, NormalMoments) {
    Philox r(3);
    double s = 0, s2 = 0, s4 = 0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double x = r.normal();
        s += x;
        s2 += x * x;
        s4 += x * x * x * x;
    }
    EXPECT_NEAR(s / n, 0, 0.01);
    EXPECT_NEAR(s2 / n, 1, 0.01);
    EXPECT_NEAR(s4 / n, 3, 0.06);
}

TEST(Haar, UnitaryAndReproducible) {
    Philox a(11), b(11);
    const ComplexMatrix U = sample_haar_unitary(40, a), V = sample_haar_unitary(40, b);
    EXPECT_LE(unitarity_defect(U), 1e-12);
    EXPECT_TRUE((U.array() == V.array()).all());
    EXPECT_THROW(sample_haar_unitary(0, a), std::invalid_argument);
}

TEST(Haar, TracePowersVanishOnAverage) {
    Philox rng(12);
    const int N = 32, R = 1000;
    std::vector<double> s(5, 0), s2(5, 0);
    for (int r = 0; r < R; ++r) {
        const ComplexMatrix U = sample_haar_unitary(N, rng);
        ComplexMatrix P = U;
        for (int n = 1; n <= 4; ++n) {
            const double x = P.trace().real() / N;
            s[n] += x;
            s2[n] += x * x;
            P = P * U;
        }
    }
    for (int n = 1; n <= 4; ++n) {
        const double mean = s[n] / R, se = std::sqrt((s2[n] / R - mean * mean) / (R - 1));
        EXPECT_LE(std::abs(mean), 3 * se) << n;
    }
}

TEST(Haar, LeftInvarianceTwoSample) {
    Philox rng(13), vr(99);
    const int N = 8, R = 2000;
    const ComplexMatrix V = sample_haar_unitary(N, vr);
    std::vector<double> a, b;
    for (int r = 0; r < R; ++r) a.push_back(sample_haar_unitary(N, rng).trace().real() / N);
    for (int r = 0; r < R; ++r) b.push_back((V * sample_haar_unitary(N, rng)).trace().real() / N);
    const double crit = 1.358 * std::sqrt(2.0 / R);
    EXPECT_LT(ks_statistic(a, b), crit);
}

TEST(HermitianBM, ExactlyHermitianWithStatedVariances) {
    Philox rng(14);
    const int N = 16, R = 10000;
    const double h = 0.1;
    double s11 = 0, s11sq = 0;
    ComplexMatrix sum = ComplexMatrix::Zero(N, N);
    Eigen::MatrixXd sumsq = Eigen::MatrixXd::Zero(N, N);
    for (int r = 0; r < R; ++r) {
        const ComplexMatrix X = hermitian_bm_increment(N, h, rng);
        ASSERT_TRUE((X.array() == X.adjoint().array()).all());
        s11 += X(0, 0).real();
        s11sq += std::norm(X(0, 0));
        const ComplexMatrix X2 = X * X;
        sum += X2;
        sumsq += X2.cwiseAbs2();
    }
    const double var = s11sq / R - std::pow(s11 / R, 2);
    EXPECT_NEAR(var, h / N, 0.05 * h / N);
    const ComplexMatrix mean = sum / R;
    int outside = 0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const cd target = i == j ? cd(h) : cd(0);
            const double se = std::sqrt((sumsq(i, j) / R - std::norm(mean(i, j))) / (R - 1));
            outside += std::abs(mean(i, j) - target) > 3 * se;
        }
    EXPECT_EQ(outside, 0);
    EXPECT_THROW(hermitian_bm_increment(N, 0, rng), std::invalid_argument);
}

TEST(UBM, ZeroTimeIsIdentityMap) {
    Philox rng(15);
    const UnitaryTuple U0 = haar_tuple(2, 6, 3);
    const UnitaryTuple U = ubm_trajectory(U0, 0, 10, rng);
    for (std::size_t k = 0; k < 2; ++k) EXPECT_TRUE((U.members[k].array() == U0.members[k].array()).all());
}

TEST(UBM, StaysUnitaryOverManySteps) {
    Philox rng(16);
    const UnitaryTuple U = ubm_trajectory(identity_tuple(1, 8), 5.0, 10000, rng);
    EXPECT_LE(unitarity_defect(U.members[0]), 1e-10);
    EXPECT_EQ(U.provenance.steps, 10000);
    EXPECT_DOUBLE_EQ(U.provenance.h, 5e-4);
}

TEST(UBM, FirstMomentDecay) {
    Philox rng(17);
    const int N = 16, paths = 200;
    double s = 0, s2 = 0;
    for (int r = 0; r < paths; ++r) {
        ComplexMatrix U = ComplexMatrix::Identity(N, N);
        ubm_path(U, 1.0, 200, rng, nullptr);
        const double x = U.trace().real() / N;
        s += x;
        s2 += x * x;
    }
    const double mean = s / paths, se = std::sqrt((s2 / paths - mean * mean) / (paths - 1));
    EXPECT_NEAR(mean, std::exp(-0.5), 3 * se + 2 * 0.005);
}

TEST(UBM, ConjugationTraceIsConstant) {
    Philox rng(18);
    ComplexMatrix A = random_matrix(rng, 6);
    ComplexMatrix U = ComplexMatrix::Identity(6, 6);
    ubm_path(U, 1.0, 100, rng, [&](long, double, const ComplexMatrix& V) {
        EXPECT_LE(std::abs((V * A * V.adjoint()).trace() - A.trace()), 1e-10);
    });
}

TEST(Eig, Examples) {
    ComplexMatrix D = ComplexMatrix::Zero(3, 3);
    D.diagonal() << 3, 1, 2;
    const auto e = eig_hermitian(D);
    EXPECT_EQ(e.values, Eigen::Vector3d(1, 2, 3));
    ComplexMatrix S(2, 2);
    S << 0, 1, 1, 0;
    const auto f = eig_hermitian(S);
    EXPECT_NEAR(f.values(0), -1, 1e-15);
    EXPECT_NEAR(f.values(1), 1, 1e-15);
    ComplexMatrix B = S;
    B(0, 1) = 2;
    EXPECT_THROW(eig_hermitian(B), std::invalid_argument);
}

TEST(Eig, ReconstructionAndPhaseConvention) {
    Philox rng(19);
    const ComplexMatrix A = random_hermitian(rng, 64);
    const auto e = eig_hermitian(A);
    const ComplexMatrix R = e.vectors * e.values.cast<cd>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LE((R - A).norm(), 1e-10 * A.norm());
    for (Eigen::Index j = 0; j + 1 < e.values.size(); ++j) EXPECT_LE(e.values(j), e.values(j + 1));
    for (Eigen::Index j = 0; j < 64; ++j) {
        Eigen::Index k;
        e.vectors.col(j).cwiseAbs().maxCoeff(&k);
        EXPECT_EQ(e.vectors(k, j).imag(), 0.0);
        EXPECT_GT(e.vectors(k, j).real(), 0.0);
    }
}

TEST(Sharp, ReducesToProductForMEqualsOne) {
    Philox rng(20);
    const ComplexMatrix x = random_matrix(rng, 5), y = random_matrix(rng, 5);
    EXPECT_LE((sharp_product(x, y, 1) - x * y).norm(), 1e-12);
    const ComplexMatrix I = ComplexMatrix::Identity(12, 12);
    EXPECT_NEAR(operator_norm(sharp_product(I, I, 3)), 1.0, 1e-12);
    EXPECT_THROW(sharp_product(I, I, 5), std::invalid_argument);
}

TEST(Sharp, SimpleTensorRule) {
    Philox rng(21);
    const ComplexMatrix A1 = random_matrix(rng, 3), A2 = random_matrix(rng, 3), B1 = random_matrix(rng, 2),
                        B2 = random_matrix(rng, 2);
    const ComplexMatrix lhs = sharp_product(kron(A1, B1), kron(A2, B2), 2);
    EXPECT_LE((lhs - kron(A1 * A2, B2 * B1)).norm(), 1e-12 * lhs.norm());
}

TEST(Sharp, NormInequalityRandomized) {
    Philox rng(22);
    std::mt19937_64 g(22);
    std::uniform_int_distribution<int> nd(1, 8), md(1, 4);
    int violations = 0;
    for (int r = 0; r < 500; ++r) {
        const int n = nd(g), M = md(g);
        const ComplexMatrix x = random_matrix(rng, n * M), y = random_matrix(rng, n * M);
        violations += operator_norm(sharp_product(x, y, M)) > M * operator_norm(x) * operator_norm(y) * (1 + 1e-12);
    }
    EXPECT_EQ(violations, 0);
}

TEST(Resolvent, Examples) {
    EXPECT_LE(std::abs(resolvent_trace(ComplexMatrix(ComplexMatrix::Zero(4, 4)), cd(1, 2)) - 1.0 / cd(1, 2)), 1e-15);
    ComplexMatrix D = ComplexMatrix::Zero(2, 2);
    D.diagonal() << 1, -1;
    EXPECT_LE(std::abs(resolvent_trace(D, cd(0, 2)) - cd(0, -0.4)), 1e-15);
    EXPECT_THROW(resolvent_trace(D, cd(1, 0)), std::invalid_argument);
}

TEST(Resolvent, HerglotzSymmetryAndDirectInverse) {
    Philox rng(23);
    for (int r = 0; r < 20; ++r) {
        const ComplexMatrix A = random_hermitian(rng, 16);
        const cd z(rng.normal(), 0.1 + rng.uniform());
        const cd G = resolvent_trace(A, z);
        EXPECT_LT(G.imag(), 0);
        EXPECT_LE(std::abs(resolvent_trace(A, std::conj(z)) - std::conj(G)), 1e-13);
        const ComplexMatrix inv = (z * ComplexMatrix::Identity(16, 16) - A).partialPivLu().solve(
            ComplexMatrix::Identity(16, 16));
        EXPECT_LE(std::abs(inv.trace() / 16.0 - G), 1e-9);
    }
}

TEST(BoundedLipschitz, Examples) {
    const EmpiricalMeasure mu(std::vector<double>{0.1, -0.3, 0.7});
    EXPECT_NEAR(bl_distance(mu, mu), 0.0, 1e-15);
    for (double eps : {0.01, 0.5, 1.3, 2.0}) {
        EXPECT_NEAR(bl_distance(EmpiricalMeasure(std::vector<double>{0.0}),
                                EmpiricalMeasure(std::vector<double>{eps})),
                    eps, 1e-12);
    }
    EXPECT_NEAR(bl_distance(EmpiricalMeasure(std::vector<double>{0.0}), EmpiricalMeasure(std::vector<double>{5.0})),
                2.0, 1e-12);
    EXPECT_THROW(bl_distance(EmpiricalMeasure(), mu), std::invalid_argument);
}

TEST(BoundedLipschitz, EqualsWassersteinOnShortSupports) {
    // on an interval of length <= 2 the bound |f| <= 1 is inactive up to a constant shift
    Philox rng(24);
    for (int r = 0; r < 30; ++r) {
        std::vector<double> a, b;
        for (int k = 0; k < 50; ++k) {
            a.push_back(2 * rng.uniform() - 1);
            b.push_back(2 * rng.uniform() - 1);
        }
        std::vector<double> sa = a, sb = b;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        double w1 = 0;
        for (int k = 0; k < 50; ++k) w1 += std::abs(sa[k] - sb[k]) / 50;
        EXPECT_NEAR(bl_distance(EmpiricalMeasure(a), EmpiricalMeasure(b)), w1, 2.0 / 4095 + 1e-12);
    }
}

TEST(BoundedLipschitz, MetricProperties) {
    Philox rng(25);
    for (int r = 0; r < 20; ++r) {
        std::vector<double> a, b, c;
        for (int k = 0; k < 30; ++k) {
            a.push_back(4 * rng.normal());
            b.push_back(3 * rng.normal() + 1);
            c.push_back(rng.uniform() * 6 - 3);
        }
        const EmpiricalMeasure A(a), B(b), C(c);
        const double ab = bl_distance(A, B), ba = bl_distance(B, A), ac = bl_distance(A, C), cb = bl_distance(C, B);
        EXPECT_NEAR(ab, ba, 1e-12);
        EXPECT_LE(ab, 2.0);
        EXPECT_LE(ab, ac + cb + 1e-2);
    }
}

TEST(Kron, Examples) {
    EXPECT_TRUE(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)).isIdentity());
    Philox rng(26);
    const ComplexMatrix A = random_matrix(rng, 3), B = random_matrix(rng, 4);
    EXPECT_LE(std::abs(kron(A, B).trace() - A.trace() * B.trace()), 1e-12);
    ComplexMatrix E = ComplexMatrix::Zero(2, 2);
    E(0, 0) = 1;
    const ComplexMatrix K = kron(E, E);
    EXPECT_EQ(K.cwiseAbs().sum(), 1.0);
    EXPECT_EQ(K(0, 0), cd(1));
    // E_ij (x) E_rs -> E_{i + r n, j + s n}
    ComplexMatrix Ea = ComplexMatrix::Zero(2, 2), Eb = ComplexMatrix::Zero(3, 3);
    Ea(0, 1) = 1;
    Eb(2, 1) = 1;
    EXPECT_EQ(kron(Ea, Eb)(0 + 2 * 2, 1 + 1 * 2), cd(1));
}

TEST(Serialization, BinaryAndJsonRoundTrip) {
    Philox rng(27);
    ComplexMatrix A(3, 5);
    for (Eigen::Index i = 0; i < A.size(); ++i) A(i) = rng.complex_normal();
    std::stringstream ss;
    write_binary(ss, A);
    EXPECT_TRUE((read_binary(ss).array() == A.array()).all());
    EXPECT_TRUE((from_json(to_json(A)).array() == A.array()).all());
    std::stringstream bad("XXXX");
    EXPECT_THROW(read_binary(bad), std::runtime_error);
    EXPECT_THROW(from_json(R"({"rows":2,"cols":2,"data":[1,2]})"), std::runtime_error);
}
