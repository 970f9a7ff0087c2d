#include "haarfree/freelimit/moment_engine.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include "haarfree/freelimit/fubm_moments.hpp"

namespace haarfree::freelim {

namespace {
constexpr double kZeroTol = 1e-13;

bool block_less(const Block& a, const Block& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.symbol != b.symbol) return a.symbol < b.symbol;
    if (a.exponent != b.exponent) return a.exponent < b.exponent;
    if (a.matrix != b.matrix) return a.matrix < b.matrix;
    return a.centered < b.centered;
}
}  // namespace

AlphabetAssignment AlphabetAssignment::haar(std::size_t p) {
    AlphabetAssignment a;
    a.unitaries.assign(p, UnitarySymbol{});
    return a;
}

AlphabetAssignment& AlphabetAssignment::with_matrices(std::vector<ComplexMatrix> Z, Eigen::Index M) {
    matrices = std::move(Z);
    outer = M;
    inner = matrices.empty() ? 1 : matrices[0].rows() / std::max<Eigen::Index>(M, 1);
    validate();
    return *this;
}

void AlphabetAssignment::validate() const {
    if (inner < 1 || outer < 1) throw std::invalid_argument("AlphabetAssignment: sizes must be positive");
    for (const auto& u : unitaries)
        if (u.role == UnitaryRole::FreeBrownian && u.t < 0)
            throw std::invalid_argument("AlphabetAssignment: negative time for a u_t symbol");
    for (const auto& m : matrices)
        if (m.rows() != inner * outer || m.cols() != inner * outer)
            throw std::invalid_argument("AlphabetAssignment: matrices must be square of size N*M");
}

Word Word::rotate(std::size_t k) const {
    if (blocks_.empty()) return *this;
    k %= blocks_.size();
    std::vector<Block> out(blocks_.begin() + static_cast<std::ptrdiff_t>(k), blocks_.end());
    out.insert(out.end(), blocks_.begin(), blocks_.begin() + static_cast<std::ptrdiff_t>(k));
    return Word(std::move(out));
}

MomentEngine::MomentEngine(AlphabetAssignment a) : a_(std::move(a)) {
    a_.validate();
    dim_ = a_.inner * a_.outer;
    for (const auto& m : a_.matrices) {
        base_handles_.push_back(intern(m));
        base_handles_.push_back(intern(m.adjoint()));
    }
}

int MomentEngine::matrix_handle(std::size_t k, bool adjoint) const {
    if (k >= a_.matrices.size()) throw std::out_of_range("MomentEngine: unassigned matrix symbol");
    return base_handles_[2 * k + (adjoint ? 1 : 0)];
}

int MomentEngine::intern(ComplexMatrix m) {
    if (m.rows() != dim_ || m.cols() != dim_) throw std::invalid_argument("MomentEngine: matrix size mismatch");
    norms_.push_back(m.norm());
    store_.push_back(std::move(m));
    return static_cast<int>(store_.size() - 1);
}

void MomentEngine::clear_cache() {
    cache_.clear();
    hits_ = 0;
}

Word MomentEngine::word_from_monomial(const poly::Monomial& m) {
    const int p = static_cast<int>(a_.p());
    Word w;
    for (const auto& l : m.letters()) {
        if (l.index <= p)
            w.append(Block::unitary(l.index - 1, l.starred ? -1 : 1));
        else
            w.append(Block::of_matrix(matrix_handle(static_cast<std::size_t>(l.index - p - 1), l.starred)));
    }
    return w;
}

bool MomentEngine::is_zero_matrix(int a) const {
    return norms_[static_cast<std::size_t>(a)] == 0.0;
}

int MomentEngine::product(int a, int b) {
    auto it = product_cache_.find({a, b});
    if (it != product_cache_.end()) return it->second;
    const int h = intern(matrix(a) * matrix(b));
    product_cache_.emplace(std::make_pair(a, b), h);
    return h;
}

int MomentEngine::expectation(int a) {
    auto it = expectation_cache_.find(a);
    if (it != expectation_cache_.end()) return it->second;
    const Eigen::Index N = a_.inner, M = a_.outer;
    const ComplexMatrix& B = matrix(a);
    ComplexMatrix b = ComplexMatrix::Zero(M, M);
    for (Eigen::Index r = 0; r < M; ++r)
        for (Eigen::Index s = 0; s < M; ++s) {
            cplx acc = 0;
            for (Eigen::Index i = 0; i < N; ++i) acc += B(i + r * N, i + s * N);
            b(r, s) = acc / static_cast<double>(N);
        }
    int h = -1;
    if (b.norm() * std::sqrt(static_cast<double>(N)) > kZeroTol * norms_[static_cast<std::size_t>(a)]) {
        ComplexMatrix E = ComplexMatrix::Zero(dim_, dim_);
        for (Eigen::Index r = 0; r < M; ++r)
            for (Eigen::Index s = 0; s < M; ++s)
                for (Eigen::Index i = 0; i < N; ++i) E(i + r * N, i + s * N) = b(r, s);
        h = intern(std::move(E));
    }
    expectation_cache_.emplace(a, h);
    return h;
}

int MomentEngine::centered(int a) {
    auto it = centered_cache_.find(a);
    if (it != centered_cache_.end()) return it->second;
    const int e = expectation(a);
    ComplexMatrix C = e >= 0 ? ComplexMatrix(matrix(a) - matrix(e)) : matrix(a);
    int h = -1;
    if (C.norm() > kZeroTol * norms_[static_cast<std::size_t>(a)]) h = intern(std::move(C));
    centered_cache_.emplace(a, h);
    return h;
}

cplx MomentEngine::trace_matrix(int handle) const {
    return matrix(handle).trace() / static_cast<double>(dim_);
}

bool MomentEngine::canonicalize(Word& w) {
    auto& v = w.blocks();
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Block> out;
        out.reserve(v.size());
        for (const Block& b : v) {
            if (b.is_unitary() && b.exponent == 0) {
                changed = true;
                continue;
            }
            if (!out.empty()) {
                Block& last = out.back();
                if (b.is_unitary() && last.is_unitary() && last.symbol == b.symbol) {
                    last.exponent += b.exponent;
                    if (last.exponent == 0) out.pop_back();
                    changed = true;
                    continue;
                }
                if (!b.is_unitary() && !last.is_unitary()) {
                    last = Block::of_matrix(product(last.matrix, b.matrix));
                    changed = true;
                    continue;
                }
            }
            out.push_back(b);
        }
        // wrap-around merge
        if (out.size() >= 2) {
            Block& first = out.front();
            const Block& last = out.back();
            if (first.is_unitary() && last.is_unitary() && first.symbol == last.symbol) {
                first.exponent += last.exponent;
                out.pop_back();
                changed = true;
            } else if (!first.is_unitary() && !last.is_unitary()) {
                first = Block::of_matrix(product(last.matrix, first.matrix));
                out.pop_back();
                changed = true;
            }
        }
        v.swap(out);
    }
    for (const Block& b : v)
        if (!b.is_unitary() && is_zero_matrix(b.matrix)) return false;

    // least rotation
    const std::size_t n = v.size();
    std::size_t best = 0;
    for (std::size_t r = 1; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const Block& x = v[(r + k) % n];
            const Block& y = v[(best + k) % n];
            if (block_less(x, y)) {
                best = r;
                break;
            }
            if (block_less(y, x)) break;
        }
    }
    if (best) w = w.rotate(best);
    return true;
}

std::string MomentEngine::key_of(const Word& w) {
    std::string key;
    key.reserve(w.size() * 10);
    for (const Block& b : w.blocks()) {
        if (b.is_unitary()) {
            key.push_back('u');
            key.append(reinterpret_cast<const char*>(&b.symbol), sizeof b.symbol);
            key.append(reinterpret_cast<const char*>(&b.exponent), sizeof b.exponent);
        } else {
            key.push_back(b.centered ? 'c' : 'm');
            key.append(reinterpret_cast<const char*>(&b.matrix), sizeof b.matrix);
        }
    }
    return key;
}

cplx MomentEngine::tau_unitary_only(const Word& w) const {
    // canonical and nonempty: a cyclically reduced non-trivial group element
    return w.empty() ? cplx(1) : cplx(0);
}

cplx MomentEngine::tau_word(const Word& w0) {
    Word w = w0;
    bool brownian = false;
    for (const Block& b : w.blocks()) {
        if (b.is_unitary()) {
            if (b.symbol < 0 || static_cast<std::size_t>(b.symbol) >= a_.p())
                throw std::out_of_range("tau_word: unassigned unitary symbol");
            brownian |= a_.unitaries[static_cast<std::size_t>(b.symbol)].role == UnitaryRole::FreeBrownian;
        } else if (b.matrix < 0 || static_cast<std::size_t>(b.matrix) >= store_.size()) {
            throw std::out_of_range("tau_word: unassigned matrix handle");
        }
    }
    if (!canonicalize(w)) return 0;
    if (brownian) {
        if (w.empty()) return 1;
        const Block& b = w.blocks()[0];
        if (w.size() != 1 || !b.is_unitary() ||
            a_.unitaries[static_cast<std::size_t>(b.symbol)].role != UnitaryRole::FreeBrownian)
            throw std::invalid_argument("tau_word: mixed u_t roles (only pure powers of one u_t are supported)");
        return fubm_moment(static_cast<int>(std::labs(b.exponent)), a_.unitaries[static_cast<std::size_t>(b.symbol)].t);
    }
    return recurse(std::move(w));
}

cplx MomentEngine::recurse(Word w) {
    if (w.empty()) return 1;
    std::size_t n_matrix = 0;
    for (const Block& b : w.blocks()) n_matrix += !b.is_unitary();
    if (n_matrix == 0) return tau_unitary_only(w);
    if (n_matrix == w.size()) return trace_matrix(w.blocks()[0].matrix);

    const std::string key = key_of(w);
    if (auto it = cache_.find(key); it != cache_.end()) {
        ++hits_;
        return it->second;
    }

    std::size_t j = w.size();
    for (std::size_t k = 0; k < w.size(); ++k)
        if (!w.blocks()[k].is_unitary() && !w.blocks()[k].centered) {
            j = k;
            break;
        }

    cplx value = 0;
    if (j < w.size()) {
        const int B = w.blocks()[j].matrix;

        if (const int c = centered(B); c >= 0) {
            Word w1 = w;
            w1.blocks()[j] = Block::of_matrix(c, true);
            if (canonicalize(w1)) value += recurse(std::move(w1));
        }

        if (const int e = expectation(B); e >= 0) {
            Word w2 = w;
            auto& v = w2.blocks();
            v.erase(v.begin() + static_cast<std::ptrdiff_t>(j));
            if (n_matrix == 1) {
                if (canonicalize(w2)) value += trace_matrix(e) * recurse(std::move(w2));
            } else {
                // I_N (x) b commutes with the unitaries: absorb it into the previous matrix block
                std::size_t i = (j + v.size() - 1) % v.size();
                while (v[i].is_unitary()) i = (i + v.size() - 1) % v.size();
                v[i].matrix = product(v[i].matrix, e);
                if (canonicalize(w2)) value += recurse(std::move(w2));
            }
        }
    }
    cache_.emplace(key, value);
    return value;
}

cplx MomentEngine::tau_poly(const poly::Polynomial& P) {
    const auto expected = a_.alphabet();
    if (P.alphabet().d != expected.d || P.alphabet().p != expected.p)
        throw std::invalid_argument("tau_poly: polynomial alphabet does not match the assignment");
    cplx s = 0;
    for (const auto& [m, c] : P.terms()) s += c * tau_word(word_from_monomial(m));
    return s;
}

cplx tau_word(const Word& w, const AlphabetAssignment& a) {
    MomentEngine e(a);
    return e.tau_word(w);
}

cplx tau_poly(const poly::Polynomial& P, const AlphabetAssignment& a) {
    MomentEngine e(a);
    return e.tau_poly(P);
}

}  // namespace haarfree::freelim
