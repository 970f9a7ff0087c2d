#pragma once

#include <array>
#include <functional>

#include "haarfree/harness/config.hpp"
#include "haarfree/polyalg/evaluation.hpp"

namespace haarfree::harness {

ComplexMatrix build_matrix(const MatrixRecipe& r, Eigen::Index size);

// The deterministic tuple Z^{NM} for one N: Z recipes at size N*M, or I_N (x) Y for Y recipes.
std::vector<ComplexMatrix> deterministic_tuple(const ExperimentConfig& c, Eigen::Index N);

// Full evaluation tuple (U_1 (x) I_M, ..., U_p (x) I_M, Z_1, ..., Z_q).
poly::MatrixTuple amplified_tuple(const std::vector<ComplexMatrix>& U, Eigen::Index M,
                                  const std::vector<ComplexMatrix>& Z);

// f(x) = int e^{ixy} dmu(y); the weights are (int |y| d|mu|, int y^4 d|mu|, int |y|^5 d|mu|).
std::array<double, 3> fourier_weight(const FunctionSpec& f);

// Real-valued test function on the line. The resolvent family has no real version.
std::function<double(double)> real_function(const FunctionSpec& f);
// Support radius S of the underlying tent for smoothed_lipschitz.
double support_radius(const FunctionSpec& f);

// Operator-norm bound for P(u (x) I_M, Z): sum |c| prod ||letter||, with unitaries of norm 1.
double norm_bound(const poly::Polynomial& P, const std::vector<ComplexMatrix>& Z);

}  // namespace haarfree::harness
