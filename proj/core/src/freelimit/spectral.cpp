#include "haarfree/freelimit/spectral.hpp"

#include <cmath>
#include <ostream>

#include <Eigen/Dense>

#include "haarfree/freelimit/reduced_polynomial.hpp"

namespace haarfree::freelim {

namespace {

bool haar_only(const MomentEngine& e) {
    for (const auto& u : e.assignment().unitaries)
        if (u.role != UnitaryRole::FreeHaar) return false;
    return true;
}

void check(std::size_t terms, const Budget& b, const char* who) {
    if (terms > b.max_terms) throw BudgetExceeded(std::string(who) + ": term budget exceeded");
}

// squaring costs size^2 word concatenations
void check_pairs(std::size_t size, const Budget& b) {
    if (static_cast<double>(size) * static_cast<double>(size) > 4.0 * static_cast<double>(b.max_terms))
        throw BudgetExceeded("limit_norm: squaring would exceed the work budget");
}

poly::Polynomial reduced_product(const poly::Polynomial& a, const poly::Polynomial& b) {
    return poly::reduce_unitary(a * b);
}

double extrapolate(const std::vector<double>& seq) {
    const std::size_t n = seq.size();
    if (n < 3) return seq.back();
    Eigen::Matrix3d A;
    Eigen::Vector3d y;
    for (int r = 0; r < 3; ++r) {
        const std::size_t j = n - 3 + static_cast<std::size_t>(r);
        const double k = std::ldexp(1.0, static_cast<int>(j));
        if (!(seq[j] > 0)) return seq.back();
        A(r, 0) = 1;
        A(r, 1) = 1 / (2 * k);
        A(r, 2) = -std::log(k) / (2 * k);
        y(r) = std::log(seq[j]);
    }
    const Eigen::Vector3d c = A.colPivHouseholderQr().solve(y);
    const double est = std::exp(c(0));
    return std::isfinite(est) ? std::max(est, seq.back()) : seq.back();
}

}  // namespace

bool is_pure_unitary(const poly::Polynomial& P) {
    for (const auto& [m, c] : P.terms())
        for (const auto& l : m.letters())
            if (!l.is_unitary()) return false;
    return true;
}

bool is_self_adjoint(const poly::Polynomial& P, double tol) {
    const poly::Polynomial D = P - P.adjoint();
    double scale = 0;
    for (const auto& [m, c] : P.terms()) scale = std::max(scale, std::abs(c));
    for (const auto& [m, c] : D.terms())
        if (std::abs(c) > tol * std::max(scale, 1.0)) return false;
    return true;
}

LimitNorm limit_norm(const poly::Polynomial& P, MomentEngine& engine, int k_max, Budget budget) {
    if (k_max < 1) throw std::invalid_argument("limit_norm: k_max must be at least 1");
    LimitNorm out;
    auto push = [&](cplx tau, int j) {
        const double v = std::max(tau.real(), 0.0);
        const double a = std::pow(v, 1.0 / std::ldexp(1.0, j + 1));
        // the exact sequence is nondecreasing; keep the certified maximum
        out.sequence.push_back(out.sequence.empty() ? a : std::max(a, out.sequence.back()));
    };
    try {
        if (is_pure_unitary(P) && haar_only(engine)) {
            const ReducedPolynomial Q = ReducedPolynomial::from(P.adjoint() * P);
            push(Q.trace(), 0);
            ReducedPolynomial A = Q;  // Q^{2^{j-1}}
            for (int j = 1; j <= k_max; ++j) {
                push(pairing(A, A), j);
                if (j < k_max) {
                    check_pairs(A.size(), budget);
                    A = A * A;
                    check(A.size(), budget, "limit_norm");
                }
            }
        } else {
            poly::Polynomial A = poly::reduce_unitary(P.adjoint() * P);
            push(engine.tau_poly(A), 0);
            for (int j = 1; j <= k_max; ++j) {
                check_pairs(A.size(), budget);
                A = reduced_product(A, A);
                push(engine.tau_poly(A), j);
            }
        }
    } catch (const BudgetExceeded&) {
        out.budget_exceeded = true;
    }
    if (out.sequence.empty()) return out;
    out.lower_bound = out.sequence.back();
    out.estimate = extrapolate(out.sequence);
    return out;
}

LimitNorm limit_norm(const poly::Polynomial& P, const AlphabetAssignment& a, int k_max, Budget budget) {
    MomentEngine e(a);
    return limit_norm(P, e, k_max, budget);
}

std::vector<double> chebyshev_coefficients(const std::function<double(double)>& f, int K) {
    if (K < 0) throw std::invalid_argument("chebyshev_coefficients: K must be nonnegative");
    const int n = K + 1;
    std::vector<double> fx(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) fx[static_cast<std::size_t>(j)] = f(std::cos(M_PI * (j + 0.5) / n));
    std::vector<double> c(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += fx[static_cast<std::size_t>(j)] * std::cos(M_PI * k * (j + 0.5) / n);
        c[static_cast<std::size_t>(k)] = (k == 0 ? 1.0 : 2.0) * s / n;
    }
    return c;
}

std::vector<double> chebyshev_moments(const poly::Polynomial& P, MomentEngine& engine, double R, int K,
                                      Budget budget) {
    if (!(R > 0)) throw std::invalid_argument("chebyshev_moments: R must be positive");
    if (K < 0) throw std::invalid_argument("chebyshev_moments: K must be nonnegative");
    if (!is_self_adjoint(P)) throw std::invalid_argument("chebyshev_moments: P must be self-adjoint");
    const auto Ku = static_cast<std::size_t>(K);
    std::vector<double> mu(Ku + 1, 0.0);
    mu[0] = 1;
    if (K == 0) return mu;
    const poly::Polynomial X = P * cplx(1.0 / R);

    if (is_pure_unitary(P) && haar_only(engine)) {
        const ReducedPolynomial x = ReducedPolynomial::from(X);
        const std::size_t half = (Ku + 1) / 2;
        std::vector<ReducedPolynomial> T;
        T.push_back(ReducedPolynomial::constant(1));
        T.push_back(x);
        for (std::size_t k = 2; k <= half; ++k) {
            ReducedPolynomial next = cplx(2) * (x * T[k - 1]);
            next += cplx(-1) * T[k - 2];
            next.prune(1e-300);
            check(next.size(), budget, "chebyshev_moments");
            T.push_back(std::move(next));
        }
        mu[1] = T[1].trace().real();
        for (std::size_t k = 2; k <= Ku; ++k) {
            const std::size_t h = k / 2;
            if (k % 2 == 0)
                mu[k] = 2 * pairing(T[h], T[h]).real() - 1;
            else
                mu[k] = 2 * pairing(T[h], T[h + 1]).real() - mu[1];
        }
    } else {
        poly::Polynomial prev = poly::Polynomial::one(P.alphabet()), cur = poly::reduce_unitary(X);
        mu[1] = engine.tau_poly(cur).real();
        for (std::size_t k = 2; k <= Ku; ++k) {
            poly::Polynomial next = reduced_product(X, cur) * cplx(2) - prev;
            check(next.size(), budget, "chebyshev_moments");
            mu[k] = engine.tau_poly(next).real();
            prev = std::move(cur);
            cur = std::move(next);
        }
    }
    for (std::size_t k = 0; k <= Ku; ++k)
        if (std::abs(mu[k]) > 1 + 1e-8)
            throw SpectralRadiusError("chebyshev_moments: spectral radius bound R is too small (|tau(T_" +
                                      std::to_string(k) + ")| > 1)");
    return mu;
}

double tau_smooth(const std::function<double(double)>& f, const poly::Polynomial& P, MomentEngine& engine,
                  double R, int K, Budget budget) {
    const auto c = chebyshev_coefficients([&](double x) { return f(R * x); }, K);
    const auto mu = chebyshev_moments(P, engine, R, K, budget);
    double s = 0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * mu[k];
    return s;
}

double tau_smooth(const std::function<double(double)>& f, const poly::Polynomial& P, const AlphabetAssignment& a,
                  double R, int K, Budget budget) {
    MomentEngine e(a);
    return tau_smooth(f, P, e, R, K, budget);
}

std::vector<cplx> power_moments(const poly::Polynomial& P, MomentEngine& engine, int k_max, Budget budget) {
    if (k_max < 0) throw std::invalid_argument("power_moments: k_max must be nonnegative");
    std::vector<cplx> out{1.0};
    if (is_pure_unitary(P) && haar_only(engine)) {
        const ReducedPolynomial x = ReducedPolynomial::from(P);
        ReducedPolynomial A = ReducedPolynomial::constant(1);
        for (int k = 1; k <= k_max; ++k) {
            A = A * x;
            check(A.size(), budget, "power_moments");
            out.push_back(A.trace());
        }
    } else {
        poly::Polynomial A = poly::Polynomial::one(P.alphabet());
        for (int k = 1; k <= k_max; ++k) {
            A = reduced_product(A, P);
            check(A.size(), budget, "power_moments");
            out.push_back(engine.tau_poly(A));
        }
    }
    return out;
}

void write_moment_table(std::ostream& os, const std::vector<cplx>& moments) {
    os << "k,re,im\n";
    os.precision(17);
    for (std::size_t k = 0; k < moments.size(); ++k)
        os << k << ',' << moments[k].real() << ',' << moments[k].imag() << '\n';
}

}  // namespace haarfree::freelim
