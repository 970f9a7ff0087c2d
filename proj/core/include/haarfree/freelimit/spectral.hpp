#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "haarfree/freelimit/moment_engine.hpp"
#include "haarfree/polyalg/polynomial.hpp"

namespace haarfree::freelim {

// Raised when a moment sequence shows mass outside [-R, R].
class SpectralRadiusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Budget {
    std::size_t max_terms = 4000000;
};

struct LimitNorm {
    std::vector<double> sequence;  // (tau((P*P)^{2^j}))^{1/2^{j+1}}, j = 0..k_max
    double lower_bound = 0;
    double estimate = 0;
    bool budget_exceeded = false;
};

// Doubling-power norm sequence with a three-point extrapolation of
// log a_k = L + c1/(2k) - c2 log(k)/(2k), k = 2^j.
LimitNorm limit_norm(const poly::Polynomial& P, MomentEngine& engine, int k_max, Budget budget = {});
LimitNorm limit_norm(const poly::Polynomial& P, const AlphabetAssignment& a, int k_max, Budget budget = {});

// Chebyshev coefficients of f on [-1, 1] by the discrete cosine transform at K+1 nodes.
std::vector<double> chebyshev_coefficients(const std::function<double(double)>& f, int K);

// tau(T_k(P/R)) for k = 0..K. Pure-unitary P is handled on reduced words with
// T_{2k} = 2 T_k^2 - 1 and T_{2k+1} = 2 T_k T_{k+1} - T_1; otherwise each T_k is expanded.
std::vector<double> chebyshev_moments(const poly::Polynomial& P, MomentEngine& engine, double R, int K,
                                      Budget budget = {});

// tau(f(P)) through the Chebyshev expansion of f on [-R, R].
double tau_smooth(const std::function<double(double)>& f, const poly::Polynomial& P, MomentEngine& engine,
                  double R, int K, Budget budget = {});
double tau_smooth(const std::function<double(double)>& f, const poly::Polynomial& P, const AlphabetAssignment& a,
                  double R, int K, Budget budget = {});

// tau(P^k), k = 0..k_max.
std::vector<cplx> power_moments(const poly::Polynomial& P, MomentEngine& engine, int k_max, Budget budget = {});

// CSV with header "k,re,im".
void write_moment_table(std::ostream& os, const std::vector<cplx>& moments);

bool is_pure_unitary(const poly::Polynomial& P);
bool is_self_adjoint(const poly::Polynomial& P, double tol = 1e-12);

}  // namespace haarfree::freelim
