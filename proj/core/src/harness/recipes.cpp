#include "haarfree/harness/recipes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "haarfree/rmt/ensembles.hpp"
#include "haarfree/rmt/matrix.hpp"
#include "haarfree/rmt/random.hpp"

namespace haarfree::harness {

ComplexMatrix build_matrix(const MatrixRecipe& r, Eigen::Index size) {
    if (size < 1) throw std::invalid_argument("build_matrix: size must be positive");
    if (r.name == "identity") return ComplexMatrix::Identity(size, size);
    if (r.name == "diag_pm1") {
        ComplexMatrix D = ComplexMatrix::Zero(size, size);
        for (Eigen::Index k = 0; k < size; ++k) D(k, k) = k % 2 ? -1.0 : 1.0;
        return D;
    }
    if (r.name == "projection") {
        const long rank = r.rank > 0 ? r.rank : std::lround(r.rank_fraction * static_cast<double>(size));
        if (rank < 0 || rank > size) throw std::invalid_argument("build_matrix: projection rank out of range");
        ComplexMatrix D = ComplexMatrix::Zero(size, size);
        for (Eigen::Index k = 0; k < rank; ++k) D(k, k) = 1.0;
        return D;
    }
    if (r.name == "haar") {
        rmt::Philox rng(r.seed, static_cast<std::uint64_t>(size));
        return rmt::sample_haar_unitary(size, rng);
    }
    throw std::invalid_argument("build_matrix: unknown recipe '" + r.name + "'");
}

std::vector<ComplexMatrix> deterministic_tuple(const ExperimentConfig& c, Eigen::Index N) {
    std::vector<ComplexMatrix> Z;
    const Eigen::Index M = c.M;
    for (const auto& r : c.Z) Z.push_back(build_matrix(r, N * M));
    for (const auto& r : c.Y) Z.push_back(rmt::kron(ComplexMatrix::Identity(N, N), build_matrix(r, M)));
    return Z;
}

poly::MatrixTuple amplified_tuple(const std::vector<ComplexMatrix>& U, Eigen::Index M,
                                  const std::vector<ComplexMatrix>& Z) {
    poly::MatrixTuple X;
    X.reserve(U.size() + Z.size());
    for (const auto& u : U) X.push_back(M == 1 ? u : rmt::kron(u, ComplexMatrix::Identity(M, M)));
    for (const auto& z : Z) X.push_back(z);
    return X;
}

std::array<double, 3> fourier_weight(const FunctionSpec& f) {
    const double pi = std::numbers::pi;
    if (f.family == "resolvent") {
        const double b = std::abs(f.z.imag());
        if (b == 0) throw std::invalid_argument("fourier_weight: resolvent needs Im z != 0");
        return {1 / (b * b), 24 / std::pow(b, 5), 120 / std::pow(b, 6)};
    }
    if (f.family == "gaussian_bump") {
        const double w = f.width;
        if (!(w > 0)) throw std::invalid_argument("fourier_weight: width must be positive");
        return {std::sqrt(2 / pi) / w, 3 / std::pow(w, 4), 8 * std::sqrt(2 / pi) / std::pow(w, 5)};
    }
    if (f.family == "smoothed_lipschitz") {
        const double e = f.epsilon;
        if (!(e > 0)) throw std::invalid_argument("fourier_weight: epsilon must be positive");
        // |mu| has density at most (S / pi) e^{-(e y)^2 / 2}
        const double s = support_radius(f) / pi;
        return {s * 2 / (e * e), s * 3 * std::sqrt(2 * pi) / std::pow(e, 5), s * 16 / std::pow(e, 6)};
    }
    if (f.family == "constant") return {0, 0, 0};
    throw std::invalid_argument("fourier_weight: unknown family '" + f.family + "'");
}

double support_radius(const FunctionSpec& f) { return std::abs(f.center) + f.half_width; }

std::function<double(double)> real_function(const FunctionSpec& f) {
    if (f.family == "gaussian_bump") {
        if (!(f.width > 0)) throw std::invalid_argument("real_function: width must be positive");
        const double c = f.center, w = f.width;
        return [c, w](double x) { return std::exp(-(x - c) * (x - c) / (2 * w * w)); };
    }
    if (f.family == "smoothed_lipschitz") {
        if (!(f.epsilon > 0) || !(f.half_width > 0))
            throw std::invalid_argument("real_function: epsilon and half_width must be positive");
        // tent of height min(1, a) and half-width a (bounded by 1, 1-Lipschitz), convolved with
        // N(0, e^2): E[max(u + eG, 0)] = u Phi(u/e) + e phi(u/e)
        const double c = f.center, a = f.half_width, e = f.epsilon, height = std::min(1.0, a);
        auto ramp = [e](double u) {
            const double s = u / e;
            return u * 0.5 * std::erfc(-s / std::sqrt(2.0)) + e * std::exp(-0.5 * s * s) / std::sqrt(2 * std::numbers::pi);
        };
        return [=](double x) {
            const double u = x - c;
            return height / a * (ramp(u + a) - 2 * ramp(u) + ramp(u - a));
        };
    }
    if (f.family == "constant") {
        const double v = f.value;
        return [v](double) { return v; };
    }
    throw std::invalid_argument("real_function: family '" + f.family + "' has no real-valued form");
}

double norm_bound(const poly::Polynomial& P, const std::vector<ComplexMatrix>& Z) {
    const int p = P.alphabet().p;
    std::vector<double> zn;
    for (const auto& z : Z) zn.push_back(rmt::operator_norm(z));
    double s = 0;
    for (const auto& [m, c] : P.terms()) {
        double t = std::abs(c);
        for (const auto& l : m.letters())
            if (l.index > p) t *= zn.at(static_cast<std::size_t>(l.index - p - 1));
        s += t;
    }
    return s;
}

}  // namespace haarfree::harness
