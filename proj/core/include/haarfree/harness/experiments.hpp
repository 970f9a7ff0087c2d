#pragma once

#include <string>
#include <vector>

#include "haarfree/harness/config.hpp"
#include "haarfree/harness/records.hpp"
#include "haarfree/rmt/measure.hpp"

namespace haarfree::harness {

// Delta(N) = |E (1/MN) tr f(P(U (x) I_M, Z)) - tau(f(P(u (x) I_M, Z)))| over the N list, and a
// weighted least-squares slope of log Delta against log N over the rows whose Monte Carlo
// error is small enough to resolve Delta.
//
// params: chebyshev_degree (24), spectral_radius (auto), norm_doublings (5), phase_orbit (1),
//         M_list (optional), min_conclusive_rows (3)
// tolerances: slope_min (-2.6), slope_max (-1.4), inconclusive_se_ratio (0.5)
RunRecord run_master_scaling(const ExperimentConfig& c);

// Stieltjes gap |E G_N(z) - G(z)| on a z grid, with G(z) summed from the free moments.
// params: z ([[0, 3]]), moment_degree (400), annulus_margin (0.05), gap_check_N (64)
// tolerances: stieltjes_gap (0.01)
RunRecord run_stieltjes(const ExperimentConfig& c);

// Bounded-Lipschitz gap between the mean empirical spectral measure and the free limit
// measure reconstructed from Jackson-damped Chebyshev moments. The standard error comes from
// the spread of the distance over replica batches.
// params: kpm_degree (1024), dlu_batches (8), dlu_grid (16384)
RunRecord run_dlu(const ExperimentConfig& c);

// Var(tr_N Q(U_T, A)) against the time integral of E tr_N(DQ(VU, A) DQ(WU, A)^*) / N, both
// by Monte Carlo, for unitary Brownian motions started at the identity.
// Var_N / Var_N' rows are informational unless both ratio_min and ratio_max are set.
// params: strata (16)
// tolerances: ratio_min, ratio_max (unset)
RunRecord run_variance_identity(const ExperimentConfig& c);

// Empirical tails of the operator norm around its mean against min(1, 4p exp(-(d/2pC)^2 N)).
// params: deltas (10 points on [0, delta_max]), delta_max (1)
RunRecord run_concentration(const ExperimentConfig& c);

// Spectral edges and Hausdorff distance to the limit support, per N.
// params: norm_doublings (8), edge_check_N (largest N), allowed_inversions (1), kpm_degree (512),
//         support_threshold (1e-3)
// tolerances: edge (0.05)
RunRecord run_strong_convergence(const ExperimentConfig& c);

// Finite-N moments of the unitary Brownian motion against the free moments, trace flows,
// and the Duhamel formula against finite differences.
// params: n_max (4), times ([0.5, 1, 2]), duhamel_trials (20), duhamel_size (4)
// tolerances: moment_abs (0.02), conjugation (1e-10), duhamel (1e-7), closed_form (1e-9)
RunRecord run_identity_checks(const ExperimentConfig& c);

// Density of the free unitary Brownian motion law on a grid, with its checks.
// params: times ([5, 8, 12]), grid (2048), n_max (8)
// tolerances: normalization (1e-8), residual (1e-12), symmetry (1e-10), moments (1e-6)
RunRecord run_density(const ExperimentConfig& c);

// Free moments tau(P^k), the limit norm sequence, and optionally u_t moment tables.
// params: k_max (12), norm_doublings (6), fubm_times (none), fubm_n_max (8)
RunRecord run_moments(const ExperimentConfig& c);

// Dispatch on c.experiment: scaling | stieltjes | dlu | variance | concentration |
// strongconv | identity | density | moments.
RunRecord run_experiment(const ExperimentConfig& c);
const std::vector<std::string>& experiment_names();

// Discretized free limit measure of a self-adjoint P from K Jackson-damped Chebyshev moments
// on [-R, R], as point masses at 4K Chebyshev angles.
rmt::DiscreteMeasure kpm_measure(const std::vector<double>& chebyshev_moments, double R);

// Hausdorff distance between two finite sets on the line.
double hausdorff_distance(std::vector<double> a, std::vector<double> b);

}  // namespace haarfree::harness
