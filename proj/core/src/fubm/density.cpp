#include "haarfree/fubm/density.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace haarfree::fubm {

namespace {

constexpr int kMaxHalvings = 60;
constexpr int kMaxIterations = 200;

void require_time(double t) {
    if (!(t > 4)) throw std::invalid_argument("fubm density: t must exceed 4 (got " + std::to_string(t) + ")");
}

// The equation is solved for w = z - 1 in logarithmic form,
//   G(w) = log w - log(2 + w) + t/2 + t w/2 - i theta  (imaginary part taken mod 2 pi),
// which avoids the cancellation in z - 1 and the e^{tz/2} scale for large t.
cplx G(double t, double theta, cplx w) {
    cplx g = std::log(w) - std::log(2.0 + w) + 0.5 * t + 0.5 * t * w - cplx(0, theta);
    const double im = std::remainder(g.imag(), 2 * M_PI);
    return {g.real(), im};
}

cplx dG(double t, cplx w) { return 1.0 / w - 1.0 / (2.0 + w) + 0.5 * t; }

// |(z-1)/(z+1) e^{tz/2} - omega| = |e^G - 1|
double residual_of(cplx g) {
    const double re = std::expm1(g.real()) * std::cos(g.imag()) - 2 * std::pow(std::sin(0.5 * g.imag()), 2);
    const double im = std::exp(g.real()) * std::sin(g.imag());
    return std::hypot(re, im);
}

struct OffsetRoot {
    cplx w;
    double residual;
};

OffsetRoot solve_offset(double t, double theta, cplx w) {
    double res = residual_of(G(t, theta, w));
    for (int it = 0; it < kMaxIterations && res > 1e-16; ++it) {
        const cplx step = -G(t, theta, w) / dG(t, w);
        double lam = 1;
        bool improved = false;
        for (int h = 0; h <= kMaxHalvings; ++h, lam *= 0.5) {
            const cplx cand = w + lam * step;
            if (cand.real() <= -1 || cand == cplx(0)) continue;
            const double r = residual_of(G(t, theta, cand));
            if (r < res) {
                w = cand;
                res = r;
                improved = true;
                break;
            }
        }
        // rounding floor reached
        if (!improved) break;
    }
    if (!(res <= 1e-12) || !(w.real() > -1)) throw ConvergenceError(t, theta);
    return {w, res};
}

double offset_at_zero(double t) {
    double lo = 0, hi = 2;
    auto g = [t](double w) { return std::log(w) - std::log(2 + w) + 0.5 * t + 0.5 * t * w; };
    for (int k = 0; k < 2000; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (g(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ConvergenceError::ConvergenceError(double t, double theta)
    : std::runtime_error("fubm density: Newton iteration failed at t=" + std::to_string(t) +
                         ", theta=" + std::to_string(theta)),
      t_(t), theta_(theta) {}

cplx root_at_zero(double t) {
    require_time(t);
    return {1.0 + offset_at_zero(t), 0.0};
}

Root solve_root(double t, double theta, cplx z0) {
    require_time(t);
    if (!(z0.real() > 0)) throw std::invalid_argument("solve_root: initial guess needs a positive real part");
    const OffsetRoot r = solve_offset(t, theta, z0 - 1.0);
    return {1.0 + r.w, r.residual};
}

SpectralDensity::SpectralDensity(double t, int grid) : t_(t) {
    require_time(t);
    if (grid < 8) throw std::invalid_argument("SpectralDensity: grid too small");
    const auto n = static_cast<std::size_t>(grid);
    theta_.resize(n);
    kappa_.resize(n);
    residual_.resize(n);
    z_.resize(n);
    cplx w = offset_at_zero(t);
    for (std::size_t j = 0; j < n; ++j) {
        theta_[j] = 2 * M_PI * static_cast<double>(j) / static_cast<double>(n);
        const OffsetRoot r = solve_offset(t, theta_[j], w);
        w = r.w;
        z_[j] = 1.0 + r.w;
        kappa_[j] = 1.0 + r.w.real();
        residual_[j] = r.residual;
    }
    cdf_.resize(n);
    cdf_[0] = 0;
    for (std::size_t j = 1; j < n; ++j)
        cdf_[j] = cdf_[j - 1] + 0.5 * (kappa_[j - 1] + kappa_[j]) / static_cast<double>(n);
}

double SpectralDensity::max_residual() const {
    return *std::max_element(residual_.begin(), residual_.end());
}

double SpectralDensity::normalization() const {
    double s = 0;
    for (double k : kappa_) s += k;
    return s / static_cast<double>(kappa_.size());
}

double SpectralDensity::moment(int n) const {
    double s = 0;
    for (std::size_t j = 0; j < kappa_.size(); ++j) s += kappa_[j] * std::cos(n * theta_[j]);
    return s / static_cast<double>(kappa_.size());
}

std::vector<double> SpectralDensity::moments(int n_max) const {
    std::vector<double> out;
    for (int n = 0; n <= n_max; ++n) out.push_back(moment(n));
    return out;
}

double SpectralDensity::sup_deviation() const {
    double s = 0;
    for (double k : kappa_) s = std::max(s, std::abs(1 - k));
    return s;
}

double SpectralDensity::quantile(double u) const {
    if (!(u >= 0 && u <= 1)) throw std::invalid_argument("quantile: u must lie in [0, 1]");
    const double total = cdf_.back() + 0.5 * (kappa_.back() + kappa_.front()) / static_cast<double>(kappa_.size());
    const double target = u * total;
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
    const std::size_t j = static_cast<std::size_t>(std::distance(cdf_.begin(), it)) - 1;
    const double lo = cdf_[j];
    const double hi = j + 1 < cdf_.size() ? cdf_[j + 1] : total;
    const double step = 2 * M_PI / static_cast<double>(kappa_.size());
    const double frac = hi > lo ? (target - lo) / (hi - lo) : 0.0;
    return std::min(theta_[j] + frac * step, std::nextafter(2 * M_PI, 0.0));
}

double kappa(double t, double theta) {
    require_time(t);
    const double th = std::remainder(theta, 2 * M_PI);
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(th) / (2 * M_PI / 2048))));
    cplx w = offset_at_zero(t);
    for (int s = 1; s <= steps; ++s) w = solve_offset(t, th * s / steps, w).w;
    return 1.0 + w.real();
}

std::vector<double> nu_moments(double t, int n_max, int grid) {
    if (n_max < 0) throw std::invalid_argument("nu_moments: n_max must be nonnegative");
    return SpectralDensity(t, grid).moments(n_max);
}

double deviation_bound(double t) { return 2 * std::exp(2.0) * std::exp(-0.5 * t); }
double upper_deviation_bound(double t) { return 2 * std::exp(-0.5 * t); }
double coupling_envelope(double t) { return 4 * std::exp(2.0) * M_PI * std::exp(-0.5 * t); }

void write_density_csv(std::ostream& os, const SpectralDensity& d) {
    os << "t,theta,kappa\n";
    os.precision(17);
    for (std::size_t j = 0; j < d.theta().size(); ++j)
        os << d.t() << ',' << d.theta()[j] << ',' << d.kappa()[j] << '\n';
}

}  // namespace haarfree::fubm
