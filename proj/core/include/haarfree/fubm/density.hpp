#pragma once

#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "haarfree/matrix_types.hpp"

namespace haarfree::fubm {

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(double t, double theta);
    double t() const { return t_; }
    double theta() const { return theta_; }

private:
    double t_, theta_;
};

struct Root {
    cplx z;
    double residual;
};

// Solves (z-1)/(z+1) e^{tz/2} = e^{i theta} with Re z > 0 by damped Newton from z0.
Root solve_root(double t, double theta, cplx z0);
// The real root on (1, 3] at theta = 0, by bisection.
cplx root_at_zero(double t);

// Density of the law of the free unitary Brownian motion at time t > 4, relative to
// the normalized Haar measure d theta / 2 pi.
class SpectralDensity {
public:
    SpectralDensity(double t, int grid = 2048);

    double t() const { return t_; }
    const std::vector<double>& theta() const { return theta_; }
    const std::vector<double>& kappa() const { return kappa_; }
    const std::vector<cplx>& roots() const { return z_; }
    const std::vector<double>& residuals() const { return residual_; }
    const std::vector<double>& cdf() const { return cdf_; }  // at theta_j, cdf_0 = 0

    double max_residual() const;
    // Periodic trapezoid rule for the normalized Haar integral of kappa.
    double normalization() const;
    // int omega^n d nu_t
    double moment(int n) const;
    std::vector<double> moments(int n_max) const;
    double sup_deviation() const;  // sup |1 - kappa|
    // inverse of the cumulative distribution, in [0, 2 pi)
    double quantile(double u) const;

private:
    double t_;
    std::vector<double> theta_, kappa_, residual_, cdf_;
    std::vector<cplx> z_;
};

// Single-angle evaluation, continued from theta = 0 in steps of at most 2 pi / 2048.
double kappa(double t, double theta);
std::vector<double> nu_moments(double t, int n_max, int grid = 2048);

// 2 e^2 e^{-t/2}: bound on 1 - kappa where kappa <= 1.
double deviation_bound(double t);
// 2 e^{-t/2}: bound on kappa - 1 where kappa >= 1.
double upper_deviation_bound(double t);
// 4 e^2 pi e^{-t/2}: bound on 2 pi sup |1 - kappa|.
double coupling_envelope(double t);

// CSV with header "t,theta,kappa".
void write_density_csv(std::ostream& os, const SpectralDensity& d);

}  // namespace haarfree::fubm
