#include "haarfree/rmt/ensembles.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/QR>

#include "haarfree/polyalg/evaluation.hpp"

namespace haarfree::rmt {

ComplexMatrix sample_haar_unitary(Eigen::Index N, Philox& rng) {
    if (N < 1) throw std::invalid_argument("sample_haar_unitary: N must be positive");
    ComplexMatrix G(N, N);
    for (Eigen::Index j = 0; j < N; ++j)
        for (Eigen::Index i = 0; i < N; ++i) G(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<ComplexMatrix> qr(G);
    ComplexMatrix Q = qr.householderQ() * ComplexMatrix::Identity(N, N);
    const ComplexMatrix& R = qr.matrixQR();
    for (Eigen::Index j = 0; j < N; ++j) {
        const cplx r = R(j, j);
        const double a = std::abs(r);
        if (a > 0) Q.col(j) *= r / a;
    }
    return Q;
}

ComplexMatrix hermitian_bm_increment(Eigen::Index N, double h, Philox& rng) {
    if (!(h > 0)) throw std::invalid_argument("hermitian_bm_increment: h must be positive");
    const double sd_diag = std::sqrt(h / static_cast<double>(N));
    const double sd_off = std::sqrt(h / (2.0 * static_cast<double>(N)));
    ComplexMatrix X(N, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        X(i, i) = sd_diag * rng.normal();
        for (Eigen::Index j = i + 1; j < N; ++j) {
            const double re = sd_off * rng.normal(), im = sd_off * rng.normal();
            X(i, j) = {re, im};
            X(j, i) = {re, -im};
        }
    }
    return X;
}

UnitaryTuple identity_tuple(std::size_t p, Eigen::Index N) {
    UnitaryTuple U;
    U.members.assign(p, ComplexMatrix::Identity(N, N));
    U.provenance.origin = "identity";
    return U;
}

UnitaryTuple haar_tuple(std::size_t p, Eigen::Index N, std::uint64_t seed, std::uint64_t stream) {
    Philox rng(seed, stream);
    UnitaryTuple U;
    for (std::size_t k = 0; k < p; ++k) U.members.push_back(sample_haar_unitary(N, rng));
    U.provenance = {"haar", seed, stream, 0, 0, 0};
    return U;
}

void ubm_step(ComplexMatrix& U, double h, Philox& rng) {
    const ComplexMatrix dX = hermitian_bm_increment(U.rows(), h, rng);
    U = U * poly::expi_hermitian(dX);
}

UnitaryTuple ubm_trajectory(const UnitaryTuple& U0, double t, long steps, Philox& rng) {
    if (t < 0) throw std::invalid_argument("ubm_trajectory: t must be nonnegative");
    if (steps < 1) throw std::invalid_argument("ubm_trajectory: steps must be positive");
    UnitaryTuple U = U0;
    U.provenance.origin = U0.provenance.origin + "+ubm";
    U.provenance.seed = rng.seed();
    U.provenance.stream = rng.stream();
    U.provenance.t = U0.provenance.t + t;
    U.provenance.h = t / static_cast<double>(steps);
    U.provenance.steps = U0.provenance.steps + steps;
    if (t == 0) return U;
    const double h = t / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s)
        for (auto& m : U.members) ubm_step(m, h, rng);
    return U;
}

void ubm_path(ComplexMatrix& U, double t, long steps, Philox& rng,
              const std::function<void(long, double, const ComplexMatrix&)>& observe) {
    if (t < 0) throw std::invalid_argument("ubm_path: t must be nonnegative");
    if (steps < 1) throw std::invalid_argument("ubm_path: steps must be positive");
    if (t == 0) return;
    const double h = t / static_cast<double>(steps);
    for (long s = 1; s <= steps; ++s) {
        ubm_step(U, h, rng);
        if (observe) observe(s, h * static_cast<double>(s), U);
    }
}

}  // namespace haarfree::rmt
