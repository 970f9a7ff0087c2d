#include "haarfree/freelimit/fubm_moments.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace haarfree::freelim {

namespace {
void rhs(const std::vector<double>& m, std::vector<double>& out) {
    const std::size_t n_max = m.size() - 1;
    out[0] = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        double s = m[n];
        for (std::size_t k = 1; k < n; ++k) s += m[k] * m[n - k];
        out[n] = -0.5 * static_cast<double>(n) * s;
    }
}
}  // namespace

std::vector<double> fubm_moments(int n_max, double t, double h) {
    if (n_max < 0) throw std::invalid_argument("fubm_moments: n_max must be nonnegative");
    if (t < 0) throw std::invalid_argument("fubm_moments: t must be nonnegative");
    if (!(h > 0)) throw std::invalid_argument("fubm_moments: step must be positive");
    const std::size_t n = static_cast<std::size_t>(n_max) + 1;
    std::vector<double> m(n, 1.0);
    if (t == 0 || n_max == 0) return m;
    const long steps = std::max(1L, static_cast<long>(std::ceil(t / h - 1e-9)));
    const double dt = t / static_cast<double>(steps);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (long s = 0; s < steps; ++s) {
        rhs(m, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = m[i] + 0.5 * dt * k1[i];
        rhs(tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = m[i] + 0.5 * dt * k2[i];
        rhs(tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = m[i] + dt * k3[i];
        rhs(tmp, k4);
        for (std::size_t i = 0; i < n; ++i) m[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    return m;
}

double fubm_moment(int n, double t) {
    if (n < 0) throw std::invalid_argument("fubm_moment: n must be nonnegative");
    return fubm_moments(n, t).back();
}

void write_fubm_table(std::ostream& os, int n_max, const std::vector<double>& times) {
    os << "n,t,m_n\n";
    os.precision(17);
    for (double t : times) {
        const auto m = fubm_moments(n_max, t);
        for (int k = 0; k <= n_max; ++k) os << k << ',' << t << ',' << m[static_cast<std::size_t>(k)] << '\n';
    }
}

}  // namespace haarfree::freelim
