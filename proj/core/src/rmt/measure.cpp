#include "haarfree/rmt/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace haarfree::rmt {

double DiscreteMeasure::total_mass() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> points) : points_(std::move(points)) {
    for (double x : points_)
        if (!std::isfinite(x)) throw std::invalid_argument("EmpiricalMeasure: non-finite point");
    std::sort(points_.begin(), points_.end());
}

EmpiricalMeasure::EmpiricalMeasure(const RealVector& eigenvalues)
    : EmpiricalMeasure(std::vector<double>(eigenvalues.data(), eigenvalues.data() + eigenvalues.size())) {}

DiscreteMeasure EmpiricalMeasure::as_discrete() const {
    DiscreteMeasure m;
    m.points = points_;
    m.weights.assign(points_.size(), points_.empty() ? 0.0 : 1.0 / static_cast<double>(points_.size()));
    return m;
}

EmpiricalMeasure pool(const std::vector<EmpiricalMeasure>& samples) {
    std::vector<double> all;
    for (const auto& s : samples) all.insert(all.end(), s.points().begin(), s.points().end());
    return EmpiricalMeasure(std::move(all));
}

namespace {

using Pt = std::pair<double, double>;  // (f, value)

double interpolate(const Pt& a, const Pt& b, double x) {
    if (b.first == a.first) return std::max(a.second, b.second);
    return a.second + (b.second - a.second) * (x - a.first) / (b.first - a.first);
}

// Restricts a piecewise-linear function to [-1, 1].
std::vector<Pt> clip(const std::vector<Pt>& pts) {
    std::vector<Pt> out;
    out.reserve(pts.size() + 2);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double x = pts[k].first;
        if (k > 0) {
            const double xp = pts[k - 1].first;
            if (xp < -1 && x > -1) out.emplace_back(-1.0, interpolate(pts[k - 1], pts[k], -1.0));
            if (xp < 1 && x > 1) out.emplace_back(1.0, interpolate(pts[k - 1], pts[k], 1.0));
        }
        if (x >= -1 && x <= 1) out.push_back(pts[k]);
    }
    return out;
}

// max over |u - f| <= h of V(u) for concave piecewise-linear V.
std::vector<Pt> window_max(const std::vector<Pt>& V, double h) {
    std::size_t a = 0;
    for (std::size_t k = 1; k < V.size(); ++k)
        if (V[k].second > V[a].second) a = k;
    std::size_t b = a;
    while (b + 1 < V.size() && V[b + 1].second == V[a].second) ++b;
    std::vector<Pt> out;
    out.reserve(V.size() + 1);
    for (std::size_t k = 0; k <= a; ++k) out.emplace_back(V[k].first - h, V[k].second);
    for (std::size_t k = b; k < V.size(); ++k) out.emplace_back(V[k].first + h, V[k].second);
    return out;
}

void drop_collinear(std::vector<Pt>& pts) {
    if (pts.size() < 3) return;
    std::vector<Pt> out;
    out.reserve(pts.size());
    out.push_back(pts[0]);
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
        const Pt& p = out.back();
        const Pt& q = pts[k];
        const Pt& r = pts[k + 1];
        const double cross = (q.first - p.first) * (r.second - p.second) - (q.second - p.second) * (r.first - p.first);
        const double scale = std::abs(r.first - p.first) * (std::abs(r.second) + std::abs(p.second) + 1.0);
        if (q.first == p.first || std::abs(cross) > 1e-14 * scale) out.push_back(q);
    }
    out.push_back(pts.back());
    pts.swap(out);
}

}  // namespace

double bl_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int grid) {
    if (mu.empty() || nu.empty()) throw std::invalid_argument("bl_distance: empty measure");
    if (grid < 2) throw std::invalid_argument("bl_distance: grid needs at least 2 nodes");
    double lo = mu.points[0], hi = lo;
    for (const auto* m : {&mu, &nu}) {
        if (m->points.size() != m->weights.size()) throw std::invalid_argument("bl_distance: size mismatch");
        for (double x : m->points) {
            if (!std::isfinite(x)) throw std::invalid_argument("bl_distance: non-finite support point");
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    if (hi == lo) return std::abs(mu.total_mass() - nu.total_mass());

    const auto G = static_cast<std::size_t>(grid);
    const double h = (hi - lo) / static_cast<double>(G - 1);
    std::vector<double> w(G, 0.0);
    auto deposit = [&](const DiscreteMeasure& m, double sign) {
        for (std::size_t k = 0; k < m.points.size(); ++k) {
            const double pos = (m.points[k] - lo) / h;
            auto j = static_cast<std::size_t>(std::floor(pos));
            if (j >= G - 1) j = G - 2;
            const double lam = std::clamp(pos - static_cast<double>(j), 0.0, 1.0);
            w[j] += sign * (1 - lam) * m.weights[k];
            w[j + 1] += sign * lam * m.weights[k];
        }
    };
    deposit(mu, 1.0);
    deposit(nu, -1.0);

    // V_j(f) = best value of sum_{k <= j} w_k f_k with f_j = f
    std::vector<Pt> V = {{-1.0, -w[0]}, {1.0, w[0]}};
    for (std::size_t j = 1; j < G; ++j) {
        V = clip(window_max(V, h));
        for (auto& [f, v] : V) v += w[j] * f;
        drop_collinear(V);
    }
    double best = 0;
    for (const auto& pt : V) best = std::max(best, pt.second);
    return best;
}

double bl_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, int grid) {
    return bl_distance(mu.as_discrete(), nu.as_discrete(), grid);
}

}  // namespace haarfree::rmt
