#include "haarfree/polyalg/evaluation.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "haarfree/polyalg/derivatives.hpp"

namespace haarfree::poly {

namespace {

const ComplexMatrix& letter_value(const Letter& l, const MatrixTuple& X, const MatrixTuple* Xstar,
                                  ComplexMatrix& scratch) {
    const ComplexMatrix& x = X[static_cast<std::size_t>(l.index - 1)];
    if (!l.starred) return x;
    if (Xstar) return (*Xstar)[static_cast<std::size_t>(l.index - 1)];
    scratch = x.adjoint();
    return scratch;
}

ComplexMatrix product_of(const Monomial& m, const MatrixTuple& X, Eigen::Index n) {
    if (m.empty()) return ComplexMatrix::Identity(n, n);
    ComplexMatrix scratch;
    ComplexMatrix acc = letter_value(m[0], X, nullptr, scratch);
    for (std::size_t k = 1; k < m.degree(); ++k) acc = acc * letter_value(m[k], X, nullptr, scratch);
    return acc;
}

}  // namespace

Eigen::Index check_tuple(const Alphabet& a, const MatrixTuple& X) {
    if (static_cast<int>(X.size()) != a.d)
        throw std::invalid_argument("evaluate: tuple length differs from alphabet size d");
    if (X.empty()) return 0;
    const Eigen::Index n = X[0].rows();
    for (const auto& x : X)
        if (x.rows() != n || x.cols() != n)
            throw std::invalid_argument("evaluate: matrices must be square and of equal size");
    return n;
}

ComplexMatrix evaluate(const Monomial& m, const MatrixTuple& X) {
    const Eigen::Index n = X.empty() ? 1 : X[0].rows();
    return product_of(m, X, n);
}

ComplexMatrix evaluate(const Polynomial& P, const MatrixTuple& X) {
    const Eigen::Index n = check_tuple(P.alphabet(), X);
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (const auto& [m, c] : P.terms()) out += c * product_of(m, X, n);
    return out;
}

EvaluatedTensor evaluate(const Tensor& T, const MatrixTuple& X, const MatrixTuple& Y) {
    const Eigen::Index n = check_tuple(T.alphabet(), X);
    if (check_tuple(T.alphabet(), Y) != n) throw std::invalid_argument("evaluate: X and Y sizes differ");
    EvaluatedTensor out;
    out.dim = n;
    out.terms.reserve(T.terms().size());
    for (const auto& [k, c] : T.terms())
        out.terms.push_back({c, product_of(k.first, X, n), product_of(k.second, Y, n)});
    return out;
}

ComplexMatrix EvaluatedTensor::dense() const {
    const Eigen::Index n = dim;
    ComplexMatrix out = ComplexMatrix::Zero(n * n, n * n);
    for (const auto& t : terms) {
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index s = 0; s < n; ++s) {
                const cplx b = t.coef * t.right(r, s);
                if (b == cplx{}) continue;
                out.block(r * n, s * n, n, n) += b * t.left;
            }
    }
    return out;
}

ComplexMatrix tensor_apply(const EvaluatedTensor& T, const ComplexMatrix& C, ContractionMode mode) {
    const Eigen::Index n = T.dim;
    if ((mode == ContractionMode::Sharp || mode == ContractionMode::SharpTilde) &&
        (C.rows() != n || C.cols() != n))
        throw std::invalid_argument("tensor_apply: dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (const auto& t : T.terms) {
        if (t.left.rows() != n || t.right.rows() != n)
            throw std::invalid_argument("tensor_apply: dimension mismatch");
        switch (mode) {
            case ContractionMode::Sharp: out += t.coef * (t.left * C * t.right); break;
            case ContractionMode::SharpTilde: out += t.coef * (t.right * C * t.left); break;
            case ContractionMode::Multiply: out += t.coef * (t.right * t.left); break;
            case ContractionMode::BoxTimes: out += t.coef * (t.left * t.right); break;
        }
    }
    return out;
}

ComplexMatrix tensor_apply(const EvaluatedTensor& T, ContractionMode mode) {
    if (mode == ContractionMode::Sharp || mode == ContractionMode::SharpTilde)
        throw std::invalid_argument("tensor_apply: this contraction needs a middle matrix");
    return tensor_apply(T, ComplexMatrix(), mode);
}

EvaluatedTensor delta_exp_evaluate(const Polynomial& P, int i, const MatrixTuple& X, int quadrature_nodes) {
    if (quadrature_nodes < 2) throw std::invalid_argument("delta_exp_evaluate: need at least 2 nodes");
    const Eigen::Index n = check_tuple(P.alphabet(), X);
    const EvaluatedTensor dP = evaluate(delta(P, i), X);
    EvaluatedTensor out;
    out.dim = n;
    if (dP.empty()) return out;

    const ComplexMatrix PX = evaluate(P, X);
    const Quadrature q = gauss_legendre_unit(quadrature_nodes);
    out.terms.reserve(q.nodes.size() * dP.terms.size());
    for (std::size_t j = 0; j < q.nodes.size(); ++j) {
        const ComplexMatrix left = expm(q.nodes[j] * PX);
        const ComplexMatrix right = expm((1.0 - q.nodes[j]) * PX);
        for (const auto& t : dP.terms)
            out.terms.push_back({q.weights[j] * t.coef, left * t.left, t.right * right});
    }
    return out;
}

Quadrature gauss_legendre_unit(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_unit: n must be positive");
    Quadrature q;
    q.nodes.resize(static_cast<std::size_t>(n));
    q.weights.resize(static_cast<std::size_t>(n));
    const double pi = std::acos(-1.0);
    for (int k = 0; k < (n + 1) / 2; ++k) {
        double x = std::cos(pi * (k + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (int m = 2; m <= n; ++m) {
                const double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1, p1 = x;
        for (int m = 2; m <= n; ++m) {
            const double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const double w = 2 / ((1 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(k), hi = static_cast<std::size_t>(n - 1 - k);
        q.nodes[lo] = 0.5 * (1 - x);
        q.nodes[hi] = 0.5 * (1 + x);
        q.weights[lo] = q.weights[hi] = 0.5 * w;
    }
    return q;
}

ComplexMatrix expm(const ComplexMatrix& A) {
    return A.exp();
}

ComplexMatrix expi_hermitian(const ComplexMatrix& H, double s) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H);
    if (es.info() != Eigen::Success) throw std::runtime_error("expi_hermitian: eigensolver failed");
    const ComplexVector phases = (cplx(0, s) * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

TraceEvaluator::TraceEvaluator(const Alphabet& a, MatrixTuple X) : alphabet_(a), X_(std::move(X)) {
    n_ = check_tuple(a, X_);
    Xstar_.reserve(X_.size());
    for (const auto& x : X_) Xstar_.push_back(x.adjoint());
}

const ComplexMatrix& TraceEvaluator::product(const Monomial& m) {
    auto it = products_.find(m);
    if (it != products_.end()) return it->second;
    ComplexMatrix value;
    if (m.empty()) {
        value = ComplexMatrix::Identity(n_, n_);
    } else if (m.degree() == 1) {
        const auto idx = static_cast<std::size_t>(m[0].index - 1);
        value = m[0].starred ? Xstar_[idx] : X_[idx];
    } else {
        const std::size_t h = m.degree() / 2;
        const Monomial a = m.slice(0, h), b = m.slice(h, m.degree());
        value = product(a) * product(b);
    }
    return products_.emplace(m, std::move(value)).first->second;
}

cplx TraceEvaluator::trace(const Monomial& m) {
    if (m.degree() <= 1) return product(m).trace();
    const std::size_t h = m.degree() / 2;
    const ComplexMatrix& a = product(m.slice(0, h));
    const ComplexMatrix& b = product(m.slice(h, m.degree()));
    // tr(AB) = sum_ij A_ij B_ji
    return a.cwiseProduct(b.transpose()).sum();
}

cplx TraceEvaluator::trace(const Polynomial& P) {
    require_same_alphabet(alphabet_, P.alphabet());
    cplx s = 0;
    for (const auto& [m, c] : P.terms()) s += c * trace(m);
    return s;
}

}  // namespace haarfree::poly
