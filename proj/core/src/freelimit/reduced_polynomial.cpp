#include "haarfree/freelimit/reduced_polynomial.hpp"

#include <stdexcept>

namespace haarfree::freelim {

ReducedPolynomial ReducedPolynomial::constant(cplx c) {
    ReducedPolynomial r;
    r.add(std::string(), c);
    return r;
}

ReducedPolynomial ReducedPolynomial::from(const poly::Polynomial& P) {
    if (P.alphabet().p > 128) throw std::invalid_argument("ReducedPolynomial: too many generators");
    ReducedPolynomial r;
    for (const auto& [m, c] : P.terms()) {
        std::string w;
        for (const auto& l : m.letters()) {
            if (!l.is_unitary()) throw std::invalid_argument("ReducedPolynomial: deterministic letter present");
            const char code = static_cast<char>(2 * (l.index - 1) + (l.starred ? 1 : 0));
            if (!w.empty() && (w.back() ^ 1) == code)
                w.pop_back();
            else
                w.push_back(code);
        }
        r.add(w, c);
    }
    return r;
}

cplx ReducedPolynomial::trace() const {
    auto it = terms_.find(std::string());
    return it == terms_.end() ? cplx(0) : it->second;
}

void ReducedPolynomial::add(const std::string& w, cplx c) {
    if (c == cplx(0)) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == cplx(0)) terms_.erase(it);
    }
}

ReducedPolynomial& ReducedPolynomial::operator+=(const ReducedPolynomial& o) {
    for (const auto& [w, c] : o.terms_) add(w, c);
    return *this;
}

ReducedPolynomial& ReducedPolynomial::operator*=(cplx s) {
    if (s == cplx(0)) {
        terms_.clear();
        return *this;
    }
    for (auto& [w, c] : terms_) c *= s;
    return *this;
}

void ReducedPolynomial::prune(double tol) {
    for (auto it = terms_.begin(); it != terms_.end();)
        it = std::abs(it->second) <= tol ? terms_.erase(it) : std::next(it);
}

std::string ReducedPolynomial::inverse(const std::string& w) {
    std::string out(w.rbegin(), w.rend());
    for (char& ch : out) ch ^= 1;
    return out;
}

std::string ReducedPolynomial::concat(const std::string& a, const std::string& b) {
    std::size_t l = 0;
    const std::size_t lim = std::min(a.size(), b.size());
    while (l < lim && (a[a.size() - 1 - l] ^ 1) == b[l]) ++l;
    std::string out;
    out.reserve(a.size() + b.size() - 2 * l);
    out.append(a, 0, a.size() - l);
    out.append(b, l, std::string::npos);
    return out;
}

ReducedPolynomial operator*(const ReducedPolynomial& a, const ReducedPolynomial& b) {
    ReducedPolynomial out;
    out.terms_.reserve(a.size() * 2 + b.size() * 2);
    for (const auto& [wa, ca] : a.terms_)
        for (const auto& [wb, cb] : b.terms_) out.add(ReducedPolynomial::concat(wa, wb), ca * cb);
    return out;
}

cplx pairing(const ReducedPolynomial& a, const ReducedPolynomial& b) {
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    cplx s = 0;
    for (const auto& [w, c] : small.terms()) {
        auto it = large.terms().find(ReducedPolynomial::inverse(w));
        if (it != large.terms().end()) s += c * it->second;
    }
    return s;
}

}  // namespace haarfree::freelim
