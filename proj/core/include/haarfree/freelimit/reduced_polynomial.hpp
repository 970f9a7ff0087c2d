#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>

#include "haarfree/matrix_types.hpp"
#include "haarfree/polyalg/polynomial.hpp"

namespace haarfree::freelim {

// Polynomial in free Haar unitaries stored on freely reduced words. Each letter is one
// byte: 2*g for generator g, 2*g+1 for its inverse.
class ReducedPolynomial {
public:
    using Terms = std::unordered_map<std::string, cplx>;

    ReducedPolynomial() = default;
    static ReducedPolynomial constant(cplx c);
    // Only unitary letters are allowed; at most 128 generators.
    static ReducedPolynomial from(const poly::Polynomial& P);

    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    cplx trace() const;  // coefficient of the empty word

    void add(const std::string& w, cplx c);
    ReducedPolynomial& operator+=(const ReducedPolynomial& o);
    ReducedPolynomial& operator*=(cplx s);
    void prune(double tol);

    friend ReducedPolynomial operator*(const ReducedPolynomial& a, const ReducedPolynomial& b);
    friend ReducedPolynomial operator+(ReducedPolynomial a, const ReducedPolynomial& b) { return a += b; }
    friend ReducedPolynomial operator*(cplx s, ReducedPolynomial a) { return a *= s; }

    static std::string inverse(const std::string& w);
    static std::string concat(const std::string& a, const std::string& b);

private:
    Terms terms_;
};

// tau(A B) = sum_w c_w(A) c_{w^-1}(B)
cplx pairing(const ReducedPolynomial& a, const ReducedPolynomial& b);

}  // namespace haarfree::freelim
