#pragma once

#include <vector>

#include "haarfree/matrix_types.hpp"

namespace haarfree::rmt {

// Finitely supported probability measure on the line.
struct DiscreteMeasure {
    std::vector<double> points;
    std::vector<double> weights;

    double total_mass() const;
    bool empty() const { return points.empty(); }
};

// Equal weights on sorted support points.
class EmpiricalMeasure {
public:
    EmpiricalMeasure() = default;
    explicit EmpiricalMeasure(std::vector<double> points);
    explicit EmpiricalMeasure(const RealVector& eigenvalues);

    const std::vector<double>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    DiscreteMeasure as_discrete() const;

private:
    std::vector<double> points_;
};

// Pools equally weighted samples into one measure (the mean empirical measure).
EmpiricalMeasure pool(const std::vector<EmpiricalMeasure>& samples);

// Supremum of |int f dmu - int f dnu| over 1-Lipschitz f with |f| <= 1. Masses are
// moved to a uniform grid over the common hull and the resulting chain linear program
// is solved exactly.
double bl_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int grid = 4096);
double bl_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, int grid = 4096);

}  // namespace haarfree::rmt
