#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "haarfree/matrix_types.hpp"

namespace haarfree::harness {

// Streaming mean and variance (Welford), with the pairwise merge of Chan et al.
class Accumulator {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }

    void merge(const Accumulator& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double n = static_cast<double>(n_ + o.n_);
        const double d = o.mean_ - mean_;
        mean_ += d * static_cast<double>(o.n_) / n;
        m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
        n_ += o.n_;
    }

    std::uint64_t count() const { return n_; }
    double mean() const { return n_ ? mean_ : std::numeric_limits<double>::quiet_NaN(); }
    double variance() const {
        return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : std::numeric_limits<double>::quiet_NaN();
    }
    double stderr_mean() const { return std::sqrt(variance() / static_cast<double>(n_)); }

private:
    std::uint64_t n_ = 0;
    double mean_ = 0;
    double m2_ = 0;
};

// Real and imaginary parts tracked separately; the standard error is that of |mean - z|.
class ComplexAccumulator {
public:
    void add(cplx z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    void merge(const ComplexAccumulator& o) {
        re_.merge(o.re_);
        im_.merge(o.im_);
    }
    std::uint64_t count() const { return re_.count(); }
    cplx mean() const { return {re_.mean(), im_.mean()}; }
    double variance() const { return re_.variance() + im_.variance(); }
    double stderr_mean() const { return std::sqrt(variance() / static_cast<double>(count())); }
    const Accumulator& real() const { return re_; }
    const Accumulator& imag() const { return im_; }

private:
    Accumulator re_, im_;
};

// Fixed-width bank of accumulators, merged slot by slot.
class AccumulatorBank {
public:
    explicit AccumulatorBank(std::size_t n = 0) : slots_(n) {}
    Accumulator& operator[](std::size_t k) { return slots_[k]; }
    const Accumulator& operator[](std::size_t k) const { return slots_[k]; }
    std::size_t size() const { return slots_.size(); }
    void merge(const AccumulatorBank& o) {
        if (slots_.empty()) slots_.resize(o.size());
        for (std::size_t k = 0; k < slots_.size(); ++k) slots_[k].merge(o.slots_[k]);
    }

private:
    std::vector<Accumulator> slots_;
};

struct LinearFit {
    double slope = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    double slope_se = std::numeric_limits<double>::quiet_NaN();
    double residual_rms = std::numeric_limits<double>::quiet_NaN();
    std::size_t points = 0;
};

// Weighted least squares for y = a + b x; weights are inverse variances.
LinearFit weighted_fit(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w);
inline LinearFit ordinary_fit(const std::vector<double>& x, const std::vector<double>& y) {
    return weighted_fit(x, y, std::vector<double>(x.size(), 1.0));
}

}  // namespace haarfree::harness
