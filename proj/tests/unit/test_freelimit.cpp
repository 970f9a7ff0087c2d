#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "haarfree/freelimit/fubm_moments.hpp"
#include "haarfree/freelimit/moment_engine.hpp"
#include "haarfree/freelimit/reduced_polynomial.hpp"
#include "haarfree/freelimit/spectral.hpp"
#include "haarfree/polyalg/evaluation.hpp"
#include "haarfree/rmt/ensembles.hpp"
#include "haarfree/rmt/matrix.hpp"
#include "haarfree/rmt/random.hpp"
#include "support/random_poly.hpp"

using namespace haarfree;
using namespace haarfree::freelim;
using poly::Polynomial;
using cd = std::complex<double>;

namespace {

Polynomial L(const poly::Alphabet& a, int i, bool s = false) { return Polynomial::letter(a, i, s); }

ComplexMatrix random_matrix(rmt::Philox& rng, Eigen::Index n) {
    ComplexMatrix A(n, n);
    for (Eigen::Index k = 0; k < A.size(); ++k) A(k) = rng.complex_normal();
    return A;
}

// Independent evaluator: explicit matrices, no handles or caching, every uncentered block
// split at once into (A - tr(A)/N) and tr(A)/N over all subsets.
struct OracleBlock {
    bool unitary;
    int symbol;
    long exponent;
    ComplexMatrix m;
    bool centered;
};

using OracleWord = std::vector<OracleBlock>;

void oracle_merge(OracleWord& w) {
    bool changed = true;
    while (changed) {
        changed = false;
        OracleWord out;
        for (auto& b : w) {
            if (b.unitary && b.exponent == 0) {
                changed = true;
                continue;
            }
            if (!out.empty() && out.back().unitary && b.unitary && out.back().symbol == b.symbol) {
                out.back().exponent += b.exponent;
                if (out.back().exponent == 0) out.pop_back();
                changed = true;
                continue;
            }
            if (!out.empty() && !out.back().unitary && !b.unitary) {
                out.back().m = out.back().m * b.m;
                out.back().centered = false;
                changed = true;
                continue;
            }
            out.push_back(b);
        }
        if (out.size() >= 2) {
            auto& f = out.front();
            auto& l = out.back();
            if (f.unitary && l.unitary && f.symbol == l.symbol) {
                f.exponent += l.exponent;
                out.pop_back();
                changed = true;
            } else if (!f.unitary && !l.unitary) {
                f.m = l.m * f.m;
                f.centered = false;
                out.pop_back();
                changed = true;
            }
        }
        w.swap(out);
    }
}

cd oracle_tau(OracleWord w) {
    oracle_merge(w);
    if (w.empty()) return 1;
    std::vector<std::size_t> open;
    bool any_unitary = false;
    for (std::size_t k = 0; k < w.size(); ++k) {
        any_unitary |= w[k].unitary;
        if (!w[k].unitary && !w[k].centered) open.push_back(k);
    }
    if (!any_unitary) return w[0].m.trace() / static_cast<double>(w[0].m.rows());
    if (open.empty()) return 0;
    cd total = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << open.size()); ++mask) {
        cd coef = 1;
        OracleWord v;
        std::size_t next = 0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            if (next < open.size() && open[next] == k) {
                const ComplexMatrix& A = w[k].m;
                const cd tr = A.trace() / static_cast<double>(A.rows());
                if (mask >> next & 1) {
                    OracleBlock c = w[k];
                    c.m = A - tr * ComplexMatrix::Identity(A.rows(), A.cols());
                    c.centered = true;
                    v.push_back(std::move(c));
                } else {
                    coef *= tr;
                }
                ++next;
            } else {
                v.push_back(w[k]);
            }
        }
        if (coef != cd(0)) total += coef * oracle_tau(std::move(v));
    }
    return total;
}

OracleWord to_oracle(const poly::Monomial& m, const AlphabetAssignment& a) {
    const int p = static_cast<int>(a.p());
    OracleWord w;
    for (const auto& l : m.letters()) {
        if (l.index <= p)
            w.push_back({true, l.index - 1, l.starred ? -1 : 1, {}, false});
        else {
            const ComplexMatrix& Z = a.matrices[static_cast<std::size_t>(l.index - p - 1)];
            w.push_back({false, 0, 0, l.starred ? ComplexMatrix(Z.adjoint()) : Z, false});
        }
    }
    return w;
}

AlphabetAssignment random_assignment(rmt::Philox& rng, std::size_t p, std::size_t q, Eigen::Index N) {
    std::vector<ComplexMatrix> Z;
    for (std::size_t k = 0; k < q; ++k) Z.push_back(random_matrix(rng, N) / std::sqrt(static_cast<double>(N)));
    return AlphabetAssignment::haar(p).with_matrices(std::move(Z));
}

double binom(int n, int k) {
    double r = 1;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

// moments of u_t: e^{-nt/2} sum_{k<n} (-t)^k/k! n^{k-1} binom(n, k+1)
double fubm_closed_form(int n, double t) {
    if (n == 0) return 1;
    double s = 0, fact = 1;
    for (int k = 0; k < n; ++k) {
        if (k) fact *= k;
        s += std::pow(-t, k) / fact * std::pow(n, k - 1) * binom(n, k + 1);
    }
    return std::exp(-n * t / 2) * s;
}

}  // namespace

TEST(TauWord, HaarPowersVanish) {
    const auto a = AlphabetAssignment::haar(2);
    for (long n : {-3L, -1L, 1L, 2L, 7L}) EXPECT_EQ(tau_word(Word({Block::unitary(0, n)}), a), cd(0));
    EXPECT_EQ(tau_word(Word(), a), cd(1));
    EXPECT_EQ(tau_word(Word({Block::unitary(1, 2), Block::unitary(1, -2)}), a), cd(1));
}

TEST(TauWord, ConjugationFactorizes) {
    rmt::Philox rng(31);
    const auto a = random_assignment(rng, 1, 2, 5);
    MomentEngine e(a);
    const Word w({Block::unitary(0, 1), Block::of_matrix(e.matrix_handle(0)), Block::unitary(0, -1),
                  Block::of_matrix(e.matrix_handle(1))});
    const cd tA = a.matrices[0].trace() / 5.0, tB = a.matrices[1].trace() / 5.0;
    EXPECT_LE(std::abs(e.tau_word(w) - tA * tB), 1e-13);
    const OracleWord ow{{true, 0, 1, {}, false}, {false, 0, 0, a.matrices[0], false},
                        {true, 0, -1, {}, false}, {false, 0, 0, a.matrices[1], false}};
    EXPECT_LE(std::abs(oracle_tau(ow) - tA * tB), 1e-13);
}

TEST(TauWord, CommutatorOfFreeUnitaries) {
    const auto a = AlphabetAssignment::haar(2);
    const Word w({Block::unitary(0, 1), Block::unitary(1, 1), Block::unitary(0, -1), Block::unitary(1, -1)});
    EXPECT_EQ(tau_word(w, a), cd(0));
    EXPECT_EQ(oracle_tau({{true, 0, 1, {}, false}, {true, 1, 1, {}, false}, {true, 0, -1, {}, false},
                          {true, 1, -1, {}, false}}),
              cd(0));
}

TEST(TauWord, Errors) {
    auto a = AlphabetAssignment::haar(1);
    EXPECT_THROW(tau_word(Word({Block::unitary(3, 1)}), a), std::out_of_range);
    EXPECT_THROW(tau_word(Word({Block::of_matrix(0)}), a), std::out_of_range);
    a.unitaries.push_back({UnitaryRole::FreeBrownian, 1.0});
    EXPECT_THROW(tau_word(Word({Block::unitary(0, 1), Block::unitary(1, 1)}), a), std::invalid_argument);
    EXPECT_NEAR(tau_word(Word({Block::unitary(1, 1)}), a).real(), std::exp(-0.5), 1e-12);
}

TEST(TauWord, AgreesWithBruteForceExpansion) {
    rmt::Philox rng(32);
    std::mt19937_64 g(32);
    for (int r = 0; r < 60; ++r) {
        const auto a = random_assignment(rng, 2, 2, 4);
        MomentEngine e(a);
        const auto m = testsupport::random_monomial(g, a.alphabet(), 9);
        const cd got = e.tau_word(e.word_from_monomial(m));
        const cd want = oracle_tau(to_oracle(m, a));
        EXPECT_LE(std::abs(got - want), 1e-10 * (1 + std::abs(want))) << r;
    }
}

TEST(TauWord, CyclicInvariance) {
    rmt::Philox rng(33);
    std::mt19937_64 g(33);
    for (int r = 0; r < 60; ++r) {
        const auto a = random_assignment(rng, 2, 2, 3);
        MomentEngine e(a);
        const auto m = testsupport::random_monomial(g, a.alphabet(), 10);
        const Word w = e.word_from_monomial(m);
        const cd base = e.tau_word(w);
        for (std::size_t k = 1; k < w.size(); ++k)
            EXPECT_LE(std::abs(e.tau_word(w.rotate(k)) - base), 1e-11 * (1 + std::abs(base)));
    }
}

TEST(TauWord, CacheHitsMatchRecomputation) {
    rmt::Philox rng(34);
    std::mt19937_64 g(34);
    const auto a = random_assignment(rng, 2, 1, 3);
    MomentEngine warm(a);
    std::vector<poly::Monomial> ms;
    std::vector<cd> first;
    for (int r = 0; r < 40; ++r) {
        ms.push_back(testsupport::random_monomial(g, a.alphabet(), 10));
        first.push_back(warm.tau_word(warm.word_from_monomial(ms.back())));
    }
    for (int r = 0; r < 40; ++r) {
        EXPECT_EQ(warm.tau_word(warm.word_from_monomial(ms[r])), first[r]);
        MomentEngine cold(a);
        EXPECT_LE(std::abs(cold.tau_word(cold.word_from_monomial(ms[r])) - first[r]), 1e-12 * (1 + std::abs(first[r])));
    }
    EXPECT_GT(warm.cache_hits(), 0u);
}

TEST(TauPoly, BinomialMoments) {
    const poly::Alphabet al(1, 1);
    const Polynomial P = L(al, 1) + L(al, 1, true);
    const auto a = AlphabetAssignment::haar(1);
    for (int k = 0; k <= 6; ++k) EXPECT_NEAR(tau_poly(poly::power(P, 2 * k), a).real(), binom(2 * k, k), 1e-9);
    EXPECT_EQ(tau_poly(Polynomial::one(al), a), cd(1));
    EXPECT_THROW(tau_poly(Polynomial::one(poly::Alphabet(2, 2)), a), std::invalid_argument);
}

TEST(TauPoly, MonomialSplitOverMatrixAmplification) {
    rmt::Philox rng(35);
    const Eigen::Index N = 3, M = 2;
    const ComplexMatrix A1 = random_matrix(rng, N), A2 = random_matrix(rng, N);
    const ComplexMatrix Y1 = random_matrix(rng, M), Y2 = random_matrix(rng, M);
    const auto a = AlphabetAssignment::haar(1).with_matrices({rmt::kron(A1, Y1), rmt::kron(A2, Y2)}, M);
    const poly::Alphabet al(3, 1);
    const Polynomial P = L(al, 1) * L(al, 2) * L(al, 1, true) * L(al, 3);
    const cd expected = (A1.trace() / 3.0) * (A2.trace() / 3.0) * (Y1 * Y2).trace() / 2.0;
    EXPECT_LE(std::abs(tau_poly(P, a) - expected), 1e-12 * (1 + std::abs(expected)));

    // identity inner part: the unitary and matrix parts decouple completely
    const auto b = AlphabetAssignment::haar(1).with_matrices(
        {rmt::kron(ComplexMatrix::Identity(N, N), Y1), rmt::kron(ComplexMatrix::Identity(N, N), Y2)}, M);
    const Polynomial Q = L(al, 1) * L(al, 2) * L(al, 1) * L(al, 3) * L(al, 1, true) * L(al, 1, true);
    EXPECT_LE(std::abs(tau_poly(Q, b) - (Y1 * Y2).trace() / 2.0), 1e-12 * (1 + std::abs((Y1 * Y2).trace())));
}

TEST(TauPoly, RealOnSelfAdjointAndPositiveOnSquares) {
    rmt::Philox rng(36);
    std::mt19937_64 g(36);
    for (int r = 0; r < 30; ++r) {
        const auto a = random_assignment(rng, 2, 1, 3);
        const Polynomial P = testsupport::random_poly(g, a.alphabet(), 4, 3);
        MomentEngine e(a);
        const cd s = e.tau_poly(poly::adjoint(P) * P);
        EXPECT_GE(s.real(), -1e-10);
        EXPECT_LE(std::abs(s.imag()), 1e-10 * (1 + std::abs(s)));
        const cd h = e.tau_poly(P + poly::adjoint(P));
        EXPECT_LE(std::abs(h.imag()), 1e-10 * (1 + std::abs(h)));
    }
}

TEST(TauPoly, ConsistentWithLargeMatrices) {
    std::mt19937_64 g(37);
    const poly::Alphabet al(2, 2);
    std::vector<Polynomial> polys;
    for (int r = 0; r < 3; ++r) polys.push_back(testsupport::random_poly(g, al, 5, 4));
    const auto a = AlphabetAssignment::haar(2);
    const int N = 300, R = 200;
    std::vector<cd> s(polys.size(), 0);
    std::vector<double> s2(polys.size(), 0);
    rmt::Philox rng(37);
    for (int r = 0; r < R; ++r) {
        const poly::MatrixTuple X{rmt::sample_haar_unitary(N, rng), rmt::sample_haar_unitary(N, rng)};
        poly::TraceEvaluator ev(al, X);
        for (std::size_t k = 0; k < polys.size(); ++k) {
            const cd v = ev.trace(polys[k]) / static_cast<double>(N);
            s[k] += v;
            s2[k] += std::norm(v);
        }
    }
    for (std::size_t k = 0; k < polys.size(); ++k) {
        const cd mean = s[k] / static_cast<double>(R);
        const double se = std::sqrt((s2[k] / R - std::norm(mean)) / (R - 1));
        EXPECT_LE(std::abs(tau_poly(polys[k], a) - mean), 3 * se) << k;
    }
}

TEST(Reduced, PairingMatchesEngine) {
    std::mt19937_64 g(38);
    const poly::Alphabet al(2, 2);
    const auto a = AlphabetAssignment::haar(2);
    for (int r = 0; r < 20; ++r) {
        const Polynomial A = testsupport::random_poly(g, al, 4, 4), B = testsupport::random_poly(g, al, 4, 4);
        const cd want = tau_poly(A * B, a);
        EXPECT_LE(std::abs(pairing(ReducedPolynomial::from(A), ReducedPolynomial::from(B)) - want), 1e-10);
        EXPECT_LE(std::abs((ReducedPolynomial::from(A) * ReducedPolynomial::from(B)).trace() - want), 1e-10);
    }
    EXPECT_THROW(ReducedPolynomial::from(Polynomial::letter(poly::Alphabet(2, 1), 2)), std::invalid_argument);
}

TEST(LimitNorm, Unitaries) {
    const poly::Alphabet al(2, 2);
    const auto a = AlphabetAssignment::haar(2);
    for (const Polynomial& P : {L(al, 1), L(al, 1) * L(al, 2)}) {
        const LimitNorm n = limit_norm(P, a, 5);
        for (double v : n.sequence) EXPECT_NEAR(v, 1.0, 1e-12);
        EXPECT_NEAR(n.lower_bound, 1.0, 1e-12);
        EXPECT_NEAR(n.estimate, 1.0, 1e-9);
    }
}

TEST(LimitNorm, ArcsineEdge) {
    const poly::Alphabet al(1, 1);
    const LimitNorm n = limit_norm(L(al, 1) + L(al, 1, true), AlphabetAssignment::haar(1), 6);
    ASSERT_EQ(n.sequence.size(), 7u);
    for (std::size_t j = 0; j + 1 < n.sequence.size(); ++j) EXPECT_LE(n.sequence[j], n.sequence[j + 1]);
    // independent: binom(2k,k)^{1/2k} at k = 2^{j+1}
    for (std::size_t j = 0; j < n.sequence.size(); ++j) {
        const int k = 1 << j;
        EXPECT_NEAR(n.sequence[j], std::exp((std::lgamma(2 * k + 1) - 2 * std::lgamma(k + 1)) / (2 * k)), 1e-9);
    }
    EXPECT_GE(n.lower_bound, 1.9);
    EXPECT_LE(n.lower_bound, 2.0);
    EXPECT_NEAR(n.estimate, 2.0, 0.02);
}

TEST(LimitNorm, BudgetIsReportedNotThrown) {
    const poly::Alphabet al(3, 3);
    const Polynomial P = L(al, 1) + L(al, 2) + L(al, 3) + L(al, 1, true);
    const LimitNorm n = limit_norm(P, AlphabetAssignment::haar(3), 12, Budget{2000});
    EXPECT_TRUE(n.budget_exceeded);
    EXPECT_FALSE(n.sequence.empty());
    for (std::size_t j = 0; j + 1 < n.sequence.size(); ++j) EXPECT_LE(n.sequence[j], n.sequence[j + 1]);
}

TEST(TauSmooth, Examples) {
    const poly::Alphabet al(1, 1);
    const Polynomial P = L(al, 1) + L(al, 1, true);
    const auto a = AlphabetAssignment::haar(1);
    EXPECT_NEAR(tau_smooth([](double) { return 1.0; }, P, a, 2.5, 16), 1.0, 1e-12);
    EXPECT_NEAR(tau_smooth([](double x) { return x * x; }, P, a, 2.5, 16), 2.0, 1e-12);
    const auto bump = [](double x) {
        const double y = std::abs(x) - 2.6;
        return y > 0 ? y * y * y : 0.0;
    };
    EXPECT_NEAR(tau_smooth(bump, P, a, 3.0, 200), 0.0, 1e-5);
    EXPECT_THROW(tau_smooth([](double x) { return x; }, P, a, 1.0, 40), SpectralRadiusError);
}

TEST(TauSmooth, KestenMcKayOracle) {
    const poly::Alphabet al(2, 2);
    const Polynomial P = L(al, 1) + L(al, 1, true) + L(al, 2) + L(al, 2, true);
    const auto a = AlphabetAssignment::haar(2);
    const double edge = 2 * std::sqrt(3.0);
    const auto f = [](double x) { return std::exp(-x * x / 4) * std::cos(x); };
    // x = edge sin(theta) removes the square-root endpoint behaviour
    double want = 0;
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
        const double th = -std::numbers::pi / 2 + (k + 0.5) * std::numbers::pi / n;
        const double x = edge * std::sin(th), c = edge * std::cos(th);
        want += (2 / std::numbers::pi) * c / (16 - x * x) * f(x) * c * std::numbers::pi / n;
    }
    EXPECT_NEAR(tau_smooth(f, P, a, 3.6, 20), want, 1e-6);
    EXPECT_NEAR(tau_smooth([](double x) { return x * x * x * x; }, P, a, 3.6, 8), 28.0, 1e-10);
}

TEST(ChebyshevMoments, GeneralPathMatchesReduced) {
    rmt::Philox rng(39);
    const auto a = AlphabetAssignment::haar(1).with_matrices({ComplexMatrix::Identity(2, 2)});
    const poly::Alphabet al(2, 1);
    const Polynomial P = L(al, 1) + L(al, 1, true) + (L(al, 2) + L(al, 2, true)) * 0.25;
    MomentEngine e(a);
    const auto c = chebyshev_moments(P, e, 3.0, 10);
    const poly::Alphabet bl(1, 1);
    MomentEngine h(AlphabetAssignment::haar(1));
    const auto d = chebyshev_moments(L(bl, 1) + L(bl, 1, true) + Polynomial::constant(bl, 0.5), h, 3.0, 10);
    for (int k = 0; k <= 10; ++k) EXPECT_NEAR(c[k], d[k], 1e-10);
    EXPECT_THROW(chebyshev_moments(L(bl, 1), h, 3.0, 4), std::invalid_argument);
}

TEST(MomentTables, Csv) {
    std::ostringstream os;
    write_moment_table(os, {1.0, cd(0, 2)});
    EXPECT_EQ(os.str().substr(0, 9), "k,re,im\n0");
    std::ostringstream fs;
    write_fubm_table(fs, 2, {0.0, 1.0});
    EXPECT_EQ(fs.str().substr(0, 9), "n,t,m_n\n0");
}

TEST(FubmMoments, ClosedForms) {
    for (int n = 0; n <= 6; ++n) EXPECT_EQ(fubm_moment(n, 0.0), 1.0);
    for (double t : {0.3, 1.0, 2.5, 6.0}) {
        EXPECT_NEAR(fubm_moment(1, t), std::exp(-t / 2), 1e-12);
        EXPECT_NEAR(fubm_moment(2, t), std::exp(-t) * (1 - t), 1e-11);
        const auto m = fubm_moments(10, t);
        for (int n = 0; n <= 10; ++n) EXPECT_NEAR(m[n], fubm_closed_form(n, t), 1e-9) << n << " " << t;
    }
}

TEST(FubmMoments, LongTimeApproachesHaar) {
    const auto m = fubm_moments(12, 10.0);
    const double bound = 2 * std::exp(2.0) * std::exp(-5.0);
    EXPECT_EQ(m[0], 1.0);
    for (int n = 1; n <= 12; ++n) EXPECT_LE(std::abs(m[n]), bound) << n;
}

TEST(FubmMoments, AgreesWithSimulation) {
    rmt::Philox rng(40);
    const int N = 48, paths = 100;
    const double t = 1.5;
    std::vector<double> s(4, 0), s2(4, 0);
    for (int r = 0; r < paths; ++r) {
        ComplexMatrix U = ComplexMatrix::Identity(N, N);
        rmt::ubm_path(U, t, 300, rng, nullptr);
        ComplexMatrix P = U;
        for (int n = 1; n <= 3; ++n) {
            const double x = P.trace().real() / N;
            s[n] += x;
            s2[n] += x * x;
            P = P * U;
        }
    }
    for (int n = 1; n <= 3; ++n) {
        const double mean = s[n] / paths, se = std::sqrt((s2[n] / paths - mean * mean) / (paths - 1));
        // finite-N and step-size corrections are O(1/N^2) and O(h)
        EXPECT_NEAR(mean, fubm_moment(n, t), 3 * se + 0.01) << n;
    }
}
