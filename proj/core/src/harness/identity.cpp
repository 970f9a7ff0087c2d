#include <cmath>
#include <stdexcept>

#include "common.hpp"
#include "haarfree/exprparse/parser.hpp"
#include "haarfree/freelimit/fubm_moments.hpp"
#include "haarfree/harness/experiments.hpp"
#include "haarfree/harness/pool.hpp"
#include "haarfree/harness/stats.hpp"
#include "haarfree/rmt/ensembles.hpp"

namespace haarfree::harness {

using namespace detail;

namespace {

ComplexMatrix gaussian(Eigen::Index n, rmt::Philox& rng) {
    ComplexMatrix G(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) G(i, j) = rng.complex_normal();
    return G;
}

double relative_error(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

void moment_checks(RunRecord& rec, const ExperimentConfig& c) {
    const int n_max = static_cast<int>(c.param("n_max", 4));
    const auto times = c.param_list("times", {0.5, 1, 2});
    const double tol = c.tolerance("moment_abs", 0.02);
    const long N = c.N.front();
    const long R = c.replicas_for(0);
    const std::uint64_t seed = stream_seed(c.seed, kIdentity, 0);
    const std::size_t slots = times.size() * static_cast<std::size_t>(n_max);

    ComplexMatrix A = c.Z.empty() ? build_matrix(MatrixRecipe{"diag_pm1"}, N) : build_matrix(c.Z.front(), N);
    const cplx trA = A.trace();

    const Stopwatch sw;
    // slots: Re tr(U_t^n)/N per (time, n); last slot: worst conjugation drift
    struct Acc {
        AccumulatorBank moments;
        double drift = 0;
        void merge(const Acc& o) {
            moments.merge(o.moments);
            drift = std::max(drift, o.drift);
        }
    };
    const auto acc = run_replicas<Acc>(
        R, c.threads, seed, [&] { return Acc{AccumulatorBank(slots), 0}; },
        [&](rmt::Philox& rng, long, Acc& a) {
            ComplexMatrix U = ComplexMatrix::Identity(N, N);
            double now = 0;
            for (std::size_t k = 0; k < times.size(); ++k) {
                const double dt = times[k] - now;
                if (dt < 0) throw std::invalid_argument("run_identity_checks: times must be ascending");
                if (dt > 0) {
                    const long steps = std::max(1L, static_cast<long>(std::ceil(dt / c.h - 1e-9)));
                    rmt::ubm_path(U, dt, steps, rng, {});
                }
                now = times[k];
                ComplexMatrix Un = U;
                for (int n = 1; n <= n_max; ++n) {
                    if (n > 1) Un = Un * U;
                    a.moments[k * static_cast<std::size_t>(n_max) + static_cast<std::size_t>(n - 1)].add(
                        Un.trace().real() / static_cast<double>(N));
                }
                const cplx flow = (U * A * U.adjoint()).trace();
                a.drift = std::max(a.drift, std::abs(flow - trA) / std::max(1.0, std::abs(trA)));
            }
        });
    const double wall = sw.seconds() / static_cast<double>(slots);

    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        const auto free = freelim::fubm_moments(n_max, t);
        for (int n = 1; n <= n_max; ++n) {
            const Accumulator& s = acc.moments[k * static_cast<std::size_t>(n_max) + static_cast<std::size_t>(n - 1)];
            Row row;
            row.quantity = "ubm_moment";
            row.label = "n=" + std::to_string(n);
            row.N = N;
            row.parameter = t;
            row.estimate = s.mean();
            row.se = s.stderr_mean();
            row.reference = free[static_cast<std::size_t>(n)];
            const double gap = std::abs(row.estimate - row.reference);
            if (t == 0) {
                row.bound = 0;
                row.verdict = row.estimate == 1 ? Verdict::Pass : Verdict::Fail;
            } else if (n == 1) {
                row.reference = std::exp(-t / 2);
                row.bound = 3 * row.se + 2 * c.h;
                row.verdict = std::abs(row.estimate - row.reference) <= row.bound ? Verdict::Pass : Verdict::Fail;
            } else {
                row.bound = tol;
                row.verdict = gap <= tol ? Verdict::Pass : Verdict::Fail;
            }
            row.seed = seed;
            row.replicas = R;
            row.wall_seconds = wall;
            rec.add(row);
        }
    }
    const double conj_tol = c.tolerance("conjugation", 1e-10);
    rec.check("conjugation_trace_flow", acc.drift <= conj_tol,
              "max relative drift of tr(U_t A U_t^*) " + fmt(acc.drift));

    // closed forms of the first two free moments
    const double cf_tol = c.tolerance("closed_form", 1e-9);
    double worst = 0;
    for (double t : times) {
        const auto m = freelim::fubm_moments(2, t);
        worst = std::max({worst, std::abs(m[1] - std::exp(-t / 2)), std::abs(m[2] - std::exp(-t) * (1 - t))});
    }
    rec.check("closed_forms", worst <= cf_tol, "max deviation " + fmt(worst));
}

void duhamel_checks(RunRecord& rec, const ExperimentConfig& c) {
    const int trials = static_cast<int>(c.param("duhamel_trials", 20));
    const auto n = static_cast<Eigen::Index>(c.param("duhamel_size", 4));
    const double tol = c.tolerance("duhamel", 1e-7);
    const std::string text = c.polynomial.empty() ? "U1*U1 + 0.5*U1'" : c.polynomial;
    const poly::Polynomial P = parse::parse(text, c.p, c.q);
    const std::uint64_t seed = stream_seed(c.seed, kDuhamel, 0);
    const double eps = 1e-3;

    double worst = 0;
    for (int k = 0; k < trials; ++k) {
        rmt::Philox rng(seed, static_cast<std::uint64_t>(k));
        poly::MatrixTuple X = haar_unitaries(c.p, n, rng);
        for (int j = 0; j < c.q; ++j) {
            const ComplexMatrix G = gaussian(n, rng);
            ComplexMatrix H = 0.5 * (G + G.adjoint());
            X.push_back(H / H.operatorNorm());
        }
        const ComplexMatrix G = gaussian(n, rng);
        ComplexMatrix C = 0.5 * (G - G.adjoint());
        C /= C.operatorNorm();
        for (int i = 1; i <= c.p; ++i) {
            const auto D = poly::delta_exp_evaluate(P, i, X);
            const ComplexMatrix lhs = poly::tensor_apply(D, C, poly::ContractionMode::Sharp);
            auto at = [&](double e) {
                poly::MatrixTuple Y = X;
                Y[static_cast<std::size_t>(i - 1)] = X[static_cast<std::size_t>(i - 1)] * poly::expm(e * C);
                return poly::expm(poly::evaluate(P, Y));
            };
            auto central = [&](double e) -> ComplexMatrix { return (at(e) - at(-e)) / (2 * e); };
            const ComplexMatrix fd = (4 * central(eps / 2) - central(eps)) / 3;
            worst = std::max(worst, relative_error(lhs, fd));
        }
    }
    Row row;
    row.quantity = "duhamel_error";
    row.label = parse::format(P);
    row.N = n;
    row.estimate = worst;
    row.se = 0;
    row.bound = tol;
    row.verdict = worst <= tol ? Verdict::Pass : Verdict::Fail;
    row.seed = seed;
    row.replicas = trials;
    rec.add(row);
}

}  // namespace

RunRecord run_identity_checks(const ExperimentConfig& c) {
    RunRecord rec;
    rec.experiment = "identity";
    moment_checks(rec, c);
    duhamel_checks(rec, c);
    return rec;
}

}  // namespace haarfree::harness
