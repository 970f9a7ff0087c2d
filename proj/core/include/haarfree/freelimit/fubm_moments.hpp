#pragma once

#include <iosfwd>
#include <vector>

namespace haarfree::freelim {

// m_n(t) = tau(u_t^n) for n = 0..n_max, from the closed system
// dm_n/dt = -(n/2) sum_{k=1}^{n} m_k m_{n-k}, m_0 = 1, m_n(0) = 1,
// integrated by classical RK4 with steps of about h, adjusted to end exactly at t.
std::vector<double> fubm_moments(int n_max, double t, double h = 1e-3);
double fubm_moment(int n, double t);

// CSV with header "n,t,m_n".
void write_fubm_table(std::ostream& os, int n_max, const std::vector<double>& times);

}  // namespace haarfree::freelim
