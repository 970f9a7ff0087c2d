#include "haarfree/harness/stats.hpp"

#include <stdexcept>

namespace haarfree::harness {

LinearFit weighted_fit(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
    if (x.size() != y.size() || x.size() != w.size()) throw std::invalid_argument("weighted_fit: size mismatch");
    LinearFit f;
    f.points = x.size();
    if (x.size() < 2) return f;
    double sw = 0, sx = 0, sy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(w[k] > 0)) throw std::invalid_argument("weighted_fit: weights must be positive");
        sw += w[k];
        sx += w[k] * x[k];
        sy += w[k] * y[k];
    }
    const double xm = sx / sw, ym = sy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += w[k] * (x[k] - xm) * (x[k] - xm);
        sxy += w[k] * (x[k] - xm) * (y[k] - ym);
    }
    if (sxx == 0) return f;
    f.slope = sxy / sxx;
    f.intercept = ym - f.slope * xm;
    double rss = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double r = y[k] - f.intercept - f.slope * x[k];
        rss += w[k] * r * r;
    }
    f.residual_rms = std::sqrt(rss / sw);
    // with inverse-variance weights the slope variance is 1/sxx
    f.slope_se = std::sqrt(1.0 / sxx);
    return f;
}

}  // namespace haarfree::harness
