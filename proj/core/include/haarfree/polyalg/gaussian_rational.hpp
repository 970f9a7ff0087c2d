#pragma once

#include <complex>
#include <ostream>

#include <boost/multiprecision/cpp_int.hpp>

namespace haarfree::poly {

using Rational = boost::multiprecision::cpp_rational;

// Exact element of Q[i]. Used to check derivative identities without rounding.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long long re) : re_(re) {}
    GaussianRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}

    const Rational& real() const { return re_; }
    const Rational& imag() const { return im_; }

    GaussianRational conj() const { return {re_, -im_}; }
    bool is_zero() const { return re_ == 0 && im_ == 0; }

    std::complex<double> to_complex() const {
        return {static_cast<double>(re_), static_cast<double>(im_)};
    }

    GaussianRational& operator+=(const GaussianRational& o) { re_ += o.re_; im_ += o.im_; return *this; }
    GaussianRational& operator-=(const GaussianRational& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
    GaussianRational& operator*=(const GaussianRational& o) {
        Rational r = re_ * o.re_ - im_ * o.im_;
        im_ = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        Rational den = o.re_ * o.re_ + o.im_ * o.im_;
        if (den == 0) throw std::domain_error("GaussianRational: division by zero");
        Rational r = (re_ * o.re_ + im_ * o.im_) / den;
        im_ = (im_ * o.re_ - re_ * o.im_) / den;
        re_ = std::move(r);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    friend std::ostream& operator<<(std::ostream& os, const GaussianRational& g) {
        return os << '(' << g.re_ << ',' << g.im_ << ')';
    }

private:
    Rational re_{0};
    Rational im_{0};
};

}  // namespace haarfree::poly
