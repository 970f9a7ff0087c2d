#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "haarfree/polyalg/gaussian_rational.hpp"

namespace haarfree::poly {

enum class LetterKind { Unitary, Deterministic };

// Indeterminates Y_1..Y_d and their adjoints. Indices 1..p are unitary letters,
// p+1..d are deterministic.
struct Alphabet {
    int d = 1;
    int p = 1;

    Alphabet() = default;
    Alphabet(int d_, int p_) : d(d_), p(p_) {
        if (d < 0 || p < 0 || p > d) throw std::invalid_argument("Alphabet: need 0 <= p <= d");
    }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

struct Letter {
    int index = 1;
    bool starred = false;
    LetterKind kind = LetterKind::Unitary;

    Letter() = default;
    Letter(const Alphabet& a, int i, bool star) : index(i), starred(star) {
        if (i < 1 || i > a.d) throw std::out_of_range("Letter: index outside [1, d]");
        kind = i <= a.p ? LetterKind::Unitary : LetterKind::Deterministic;
    }

    Letter adjoint() const {
        Letter l = *this;
        l.starred = !starred;
        return l;
    }
    bool is_unitary() const { return kind == LetterKind::Unitary; }

    // kind is a function of index, so it takes no part in comparisons
    friend bool operator==(const Letter& a, const Letter& b) {
        return a.index == b.index && a.starred == b.starred;
    }
    friend std::strong_ordering operator<=>(const Letter& a, const Letter& b) {
        if (auto c = a.index <=> b.index; c != 0) return c;
        return a.starred <=> b.starred;
    }
};

// Word in the letters. The empty word is the unit. Ordered by degree, then lexicographically.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<Letter> letters) : letters_(std::move(letters)) {}

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t degree() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    const Letter& operator[](std::size_t k) const { return letters_[k]; }

    Monomial adjoint() const {
        std::vector<Letter> out;
        out.reserve(letters_.size());
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(it->adjoint());
        return Monomial(std::move(out));
    }

    Monomial slice(std::size_t begin, std::size_t end) const {
        return Monomial({letters_.begin() + static_cast<std::ptrdiff_t>(begin),
                         letters_.begin() + static_cast<std::ptrdiff_t>(end)});
    }

    std::size_t unitary_degree() const {
        std::size_t n = 0;
        for (const auto& l : letters_) n += l.is_unitary();
        return n;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        std::vector<Letter> out;
        out.reserve(a.degree() + b.degree());
        out.insert(out.end(), a.letters_.begin(), a.letters_.end());
        out.insert(out.end(), b.letters_.begin(), b.letters_.end());
        return Monomial(std::move(out));
    }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.letters_ == b.letters_; }
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
        if (auto c = a.degree() <=> b.degree(); c != 0) return c;
        for (std::size_t k = 0; k < a.degree(); ++k)
            if (auto c = a.letters_[k] <=> b.letters_[k]; c != 0) return c;
        return std::strong_ordering::equal;
    }

private:
    std::vector<Letter> letters_;
};

template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<std::complex<double>> {
    using C = std::complex<double>;
    static C zero() { return {0.0, 0.0}; }
    static C one() { return {1.0, 0.0}; }
    static bool is_zero(const C& c) { return c == zero(); }
    static C conj(const C& c) { return std::conj(c); }
    static double abs(const C& c) { return std::abs(c); }
    static std::complex<double> to_complex(const C& c) { return c; }
};

template <>
struct CoeffTraits<GaussianRational> {
    using C = GaussianRational;
    static C zero() { return {}; }
    static C one() { return C(1); }
    static bool is_zero(const C& c) { return c.is_zero(); }
    static C conj(const C& c) { return c.conj(); }
    static double abs(const C& c) { return std::abs(c.to_complex()); }
    static std::complex<double> to_complex(const C& c) { return c.to_complex(); }
};

inline void require_same_alphabet(const Alphabet& a, const Alphabet& b) {
    if (!(a == b)) throw std::invalid_argument("alphabet mismatch (d, p differ)");
}

// Finite linear combination of monomials. Zero coefficients are never stored.
template <class C>
class BasicPolynomial {
public:
    using Traits = CoeffTraits<C>;
    using Terms = std::map<Monomial, C>;

    BasicPolynomial() = default;
    explicit BasicPolynomial(Alphabet a) : alphabet_(a) {}

    static BasicPolynomial constant(Alphabet a, C c) {
        BasicPolynomial p(a);
        p.add_term(Monomial{}, std::move(c));
        return p;
    }
    static BasicPolynomial one(Alphabet a) { return constant(a, Traits::one()); }
    static BasicPolynomial letter(Alphabet a, int i, bool starred = false) {
        BasicPolynomial p(a);
        p.add_term(Monomial({Letter(a, i, starred)}), Traits::one());
        return p;
    }
    static BasicPolynomial monomial(Alphabet a, Monomial m, C c) {
        BasicPolynomial p(a);
        p.add_term(std::move(m), std::move(c));
        return p;
    }

    const Alphabet& alphabet() const { return alphabet_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    std::size_t degree() const {
        std::size_t d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    C coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Traits::zero() : it->second;
    }

    void add_term(const Monomial& m, const C& c) {
        if (Traits::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (Traits::is_zero(it->second)) terms_.erase(it);
        }
    }

    BasicPolynomial adjoint() const {
        BasicPolynomial out(alphabet_);
        for (const auto& [m, c] : terms_) out.add_term(m.adjoint(), Traits::conj(c));
        return out;
    }

    bool is_self_adjoint() const { return *this == adjoint(); }

    BasicPolynomial& operator+=(const BasicPolynomial& o) {
        require_same_alphabet(alphabet_, o.alphabet_);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    BasicPolynomial& operator-=(const BasicPolynomial& o) {
        require_same_alphabet(alphabet_, o.alphabet_);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    BasicPolynomial& operator*=(const C& s) {
        if (Traits::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto it = terms_.begin(); it != terms_.end();) {
            it->second *= s;
            it = Traits::is_zero(it->second) ? terms_.erase(it) : std::next(it);
        }
        return *this;
    }

    friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) { return a += b; }
    friend BasicPolynomial operator-(BasicPolynomial a, const BasicPolynomial& b) { return a -= b; }
    friend BasicPolynomial operator-(BasicPolynomial a) { return a *= -Traits::one(); }
    friend BasicPolynomial operator*(BasicPolynomial a, const C& s) { return a *= s; }
    friend BasicPolynomial operator*(const C& s, BasicPolynomial a) { return a *= s; }

    friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
        require_same_alphabet(a.alphabet_, b.alphabet_);
        BasicPolynomial out(a.alphabet_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
        return out;
    }

    friend bool operator==(const BasicPolynomial& a, const BasicPolynomial& b) {
        return a.alphabet_ == b.alphabet_ && a.terms_ == b.terms_;
    }

private:
    Alphabet alphabet_;
    Terms terms_;
};

using Polynomial = BasicPolynomial<std::complex<double>>;
using ExactPolynomial = BasicPolynomial<GaussianRational>;

template <class C>
BasicPolynomial<C> multiply(const BasicPolynomial<C>& a, const BasicPolynomial<C>& b) {
    return a * b;
}

template <class C>
BasicPolynomial<C> adjoint(const BasicPolynomial<C>& a) {
    return a.adjoint();
}

template <class C>
BasicPolynomial<C> power(const BasicPolynomial<C>& a, unsigned n) {
    auto out = BasicPolynomial<C>::one(a.alphabet());
    for (unsigned k = 0; k < n; ++k) out = out * a;
    return out;
}

// sum_M |c_M| A^{deg M}
template <class C>
double norm_A(const BasicPolynomial<C>& P, double A) {
    if (A < 0) throw std::invalid_argument("norm_A: A must be nonnegative");
    double s = 0;
    for (const auto& [m, c] : P.terms())
        s += CoeffTraits<C>::abs(c) * std::pow(A, static_cast<double>(m.degree()));
    return s;
}

// Cancels adjacent U_i U_i^* and U_i^* U_i for unitary letters until none remain.
template <class C>
BasicPolynomial<C> reduce_unitary(const BasicPolynomial<C>& P) {
    BasicPolynomial<C> out(P.alphabet());
    for (const auto& [m, c] : P.terms()) {
        std::vector<Letter> stack;
        for (const auto& l : m.letters()) {
            if (!stack.empty() && l.is_unitary() && stack.back().index == l.index &&
                stack.back().starred != l.starred)
                stack.pop_back();
            else
                stack.push_back(l);
        }
        out.add_term(Monomial(std::move(stack)), c);
    }
    return out;
}

template <class Out, class In>
BasicPolynomial<Out> convert(const BasicPolynomial<In>& P) {
    BasicPolynomial<Out> out(P.alphabet());
    for (const auto& [m, c] : P.terms()) {
        if constexpr (std::is_same_v<Out, std::complex<double>>)
            out.add_term(m, CoeffTraits<In>::to_complex(c));
        else
            out.add_term(m, Out(c));
    }
    return out;
}

// Element of P_d (x) P_d, stored as a sparse map over pairs of monomials.
template <class C>
class BasicTensor {
public:
    using Traits = CoeffTraits<C>;
    using Key = std::pair<Monomial, Monomial>;
    using Terms = std::map<Key, C>;

    BasicTensor() = default;
    explicit BasicTensor(Alphabet a) : alphabet_(a) {}

    static BasicTensor simple(const BasicPolynomial<C>& A, const BasicPolynomial<C>& B) {
        require_same_alphabet(A.alphabet(), B.alphabet());
        BasicTensor t(A.alphabet());
        for (const auto& [ma, ca] : A.terms())
            for (const auto& [mb, cb] : B.terms()) t.add_term(ma, mb, ca * cb);
        return t;
    }

    const Alphabet& alphabet() const { return alphabet_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Monomial& a, const Monomial& b, const C& c) {
        if (Traits::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(Key{a, b}, c);
        if (!inserted) {
            it->second += c;
            if (Traits::is_zero(it->second)) terms_.erase(it);
        }
    }

    BasicTensor& operator+=(const BasicTensor& o) {
        require_same_alphabet(alphabet_, o.alphabet_);
        for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
        return *this;
    }
    BasicTensor& operator-=(const BasicTensor& o) {
        require_same_alphabet(alphabet_, o.alphabet_);
        for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
        return *this;
    }
    friend BasicTensor operator+(BasicTensor a, const BasicTensor& b) { return a += b; }
    friend BasicTensor operator-(BasicTensor a, const BasicTensor& b) { return a -= b; }

    // (A (x) B)(C (x) D) = AC (x) BD
    friend BasicTensor operator*(const BasicTensor& s, const BasicTensor& t) {
        require_same_alphabet(s.alphabet_, t.alphabet_);
        BasicTensor out(s.alphabet_);
        for (const auto& [k1, c1] : s.terms_)
            for (const auto& [k2, c2] : t.terms_)
                out.add_term(k1.first * k2.first, k1.second * k2.second, c1 * c2);
        return out;
    }

    // m(A (x) B) = BA
    BasicPolynomial<C> multiply_out() const {
        BasicPolynomial<C> out(alphabet_);
        for (const auto& [k, c] : terms_) out.add_term(k.second * k.first, c);
        return out;
    }

    friend bool operator==(const BasicTensor& a, const BasicTensor& b) {
        return a.alphabet_ == b.alphabet_ && a.terms_ == b.terms_;
    }

private:
    Alphabet alphabet_;
    Terms terms_;
};

using Tensor = BasicTensor<std::complex<double>>;
using ExactTensor = BasicTensor<GaussianRational>;

}  // namespace haarfree::poly
