#pragma once

#include <stdexcept>

#include "haarfree/polyalg/polynomial.hpp"

namespace haarfree::poly {

enum class CyclicFlavor { D, DStar, Script };

// Non-commutative partial derivative with respect to Y_i (or Y_i^* when starred).
// Each occurrence of the letter at position k contributes prefix (x) suffix.
template <class C>
BasicTensor<C> partial(const BasicPolynomial<C>& P, int i, bool starred = false) {
    const Alphabet& a = P.alphabet();
    if (i < 1 || i > a.d) throw std::out_of_range("partial: index outside [1, d]");
    BasicTensor<C> out(a);
    for (const auto& [m, c] : P.terms()) {
        for (std::size_t k = 0; k < m.degree(); ++k) {
            if (m[k].index == i && m[k].starred == starred)
                out.add_term(m.slice(0, k), m.slice(k + 1, m.degree()), c);
        }
    }
    return out;
}

// Unitary derivative: delta_i Y_i = Y_i (x) 1, delta_i Y_i^* = -1 (x) Y_i^*.
template <class C>
BasicTensor<C> delta(const BasicPolynomial<C>& P, int i) {
    const Alphabet& a = P.alphabet();
    if (i < 1 || i > a.p) throw std::out_of_range("delta: index outside [1, p]");
    BasicTensor<C> out(a);
    for (const auto& [m, c] : P.terms()) {
        const std::size_t n = m.degree();
        for (std::size_t k = 0; k < n; ++k) {
            if (m[k].index != i) continue;
            if (m[k].starred)
                out.add_term(m.slice(0, k), m.slice(k, n), -c);
            else
                out.add_term(m.slice(0, k + 1), m.slice(k + 1, n), c);
        }
    }
    return out;
}

template <class C>
BasicPolynomial<C> cyclic_derivative(const BasicPolynomial<C>& P, int i, CyclicFlavor flavor) {
    switch (flavor) {
        case CyclicFlavor::D: return partial(P, i, false).multiply_out();
        case CyclicFlavor::DStar: return partial(P, i, true).multiply_out();
        case CyclicFlavor::Script: return delta(P, i).multiply_out();
    }
    throw std::invalid_argument("cyclic_derivative: unknown flavor");
}

}  // namespace haarfree::poly
