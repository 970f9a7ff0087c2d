#include <cmath>
#include <stdexcept>

#include "common.hpp"
#include "haarfree/harness/experiments.hpp"
#include "haarfree/harness/pool.hpp"
#include "haarfree/harness/stats.hpp"
#include "haarfree/polyalg/derivatives.hpp"
#include "haarfree/rmt/ensembles.hpp"

namespace haarfree::harness {

using namespace detail;

namespace {

struct ComplexSamples {
    std::vector<cplx> values;
    void merge(const ComplexSamples& o) { values.insert(values.end(), o.values.begin(), o.values.end()); }
};

long steps_for(double t, double h) { return std::max(1L, static_cast<long>(std::ceil(t / h - 1e-9))); }

std::vector<ComplexMatrix> brownian(int p, Eigen::Index N, double t, double h, rmt::Philox& rng) {
    const auto U0 = rmt::identity_tuple(static_cast<std::size_t>(p), N);
    if (t <= 0) return U0.members;
    return rmt::ubm_trajectory(U0, t, steps_for(t, h), rng).members;
}

poly::MatrixTuple with_matrices(std::vector<ComplexMatrix> U, const std::vector<ComplexMatrix>& Z) {
    U.insert(U.end(), Z.begin(), Z.end());
    return U;
}

struct SampleVariance {
    double value = 0;
    double se = 0;
};

// Unbiased variance of complex samples; its standard error from the fourth central moment.
SampleVariance sample_variance(const std::vector<cplx>& v) {
    const double n = static_cast<double>(v.size());
    cplx mean = 0;
    for (const cplx& x : v) mean += x;
    mean /= n;
    double m2 = 0, m4 = 0;
    for (const cplx& x : v) {
        const double d = std::norm(x - mean);
        m2 += d;
        m4 += d * d;
    }
    m2 /= n;
    m4 /= n;
    return {m2 * n / (n - 1), std::sqrt(std::max(m4 - m2 * m2, 0.0) / n)};
}

}  // namespace

RunRecord run_variance_identity(const ExperimentConfig& c) {
    RunRecord rec;
    rec.experiment = "variance";
    const poly::Polynomial Q = c.parsed_polynomial();
    if (Q.degree() == 0) throw std::invalid_argument("run_variance_identity: Q is constant");
    if (c.M != 1) throw std::invalid_argument("run_variance_identity: M must be 1");
    if (c.replicas < 2) throw std::invalid_argument("run_variance_identity: need at least 2 replicas");
    const auto strata = static_cast<std::size_t>(c.param("strata", 16));
    if (strata < 1) throw std::invalid_argument("run_variance_identity: strata must be positive");
    const double T = c.T;

    std::vector<poly::Polynomial> DQ;
    for (int k = 1; k <= c.p; ++k) DQ.push_back(poly::cyclic_derivative(Q, k, poly::CyclicFlavor::Script));

    // single unitary letter with coefficient a: both sides equal |a|^2 (1 - e^{-T})
    double reference = std::numeric_limits<double>::quiet_NaN();
    if (Q.size() == 1) {
        const auto& [m, a] = *Q.terms().begin();
        if (m.degree() == 1 && m[0].is_unitary()) reference = std::norm(a) * -std::expm1(-T);
    }
    bool has_unitary = false;
    for (const auto& [m, a] : Q.terms()) has_unitary = has_unitary || m.unitary_degree() > 0;
    if (!has_unitary) reference = 0;

    std::vector<double> lhs_by_N;
    for (std::size_t i = 0; i < c.N.size(); ++i) {
        const long N = c.N[i];
        const auto Z = deterministic_tuple(c, N);
        const long R = c.replicas_for(i);

        Stopwatch sw;
        const std::uint64_t seed_l = stream_seed(c.seed, kVarianceLhs, i);
        const auto lhs_samples = run_replicas<ComplexSamples>(
            R, c.threads, seed_l, [] { return ComplexSamples(); },
            [&](rmt::Philox& rng, long, ComplexSamples& acc) {
                const auto U = brownian(c.p, N, T, c.h, rng);
                acc.values.push_back(poly::evaluate(Q, with_matrices(U, Z)).trace());
            });
        const SampleVariance lhs = sample_variance(lhs_samples.values);
        const double wall_l = sw.seconds();

        sw = Stopwatch();
        const std::uint64_t seed_r = stream_seed(c.seed, kVarianceRhs, i);
        const auto bank = run_replicas<AccumulatorBank>(
            R, c.threads, seed_r, [&] { return AccumulatorBank(strata); },
            [&](rmt::Philox& rng, long k, AccumulatorBank& acc) {
                const std::size_t s = static_cast<std::size_t>(k) % strata;
                const double t = T * (static_cast<double>(s) + rng.uniform()) / static_cast<double>(strata);
                const auto U = brownian(c.p, N, t, c.h, rng);
                const auto V = brownian(c.p, N, T - t, c.h, rng);
                const auto W = brownian(c.p, N, T - t, c.h, rng);
                std::vector<ComplexMatrix> VU, WU;
                for (int g = 0; g < c.p; ++g) {
                    VU.push_back(V[static_cast<std::size_t>(g)] * U[static_cast<std::size_t>(g)]);
                    WU.push_back(W[static_cast<std::size_t>(g)] * U[static_cast<std::size_t>(g)]);
                }
                const auto X = with_matrices(VU, Z), Y = with_matrices(WU, Z);
                double v = 0;
                for (const auto& D : DQ) {
                    if (D.is_zero()) continue;
                    v += (poly::evaluate(D, X) * poly::evaluate(D, Y).adjoint()).trace().real();
                }
                acc[s].add(v);
            });
        // stratified mean of the integrand, times T / N
        double mean = 0, var = 0;
        long counted = 0;
        for (std::size_t s = 0; s < strata; ++s) {
            if (bank[s].count() == 0) continue;
            ++counted;
            mean += bank[s].mean();
            if (bank[s].count() > 1) var += bank[s].variance() / static_cast<double>(bank[s].count());
        }
        if (counted != static_cast<long>(strata))
            throw std::invalid_argument("run_variance_identity: replicas must cover every stratum");
        const double scale = T / static_cast<double>(strata) / static_cast<double>(N);
        const double rhs = mean * scale, rhs_se = std::sqrt(var) * scale;
        const double wall_r = sw.seconds();

        Row l;
        l.quantity = "variance_lhs";
        l.N = N;
        l.parameter = T;
        l.estimate = lhs.value;
        l.se = lhs.se;
        l.reference = reference;
        l.seed = seed_l;
        l.replicas = R;
        l.wall_seconds = wall_l;
        rec.add(l);
        Row r = l;
        r.quantity = "variance_rhs";
        r.estimate = rhs;
        r.se = rhs_se;
        r.seed = seed_r;
        r.wall_seconds = wall_r;
        rec.add(r);
        lhs_by_N.push_back(lhs.value);

        const double z = 1.959963984540054;
        const bool overlap = l.estimate - z * l.se <= r.estimate + z * r.se && r.estimate - z * r.se <= l.estimate + z * l.se;
        rec.check("overlap N=" + std::to_string(N), overlap,
                  "lhs " + fmt(l.estimate) + " +- " + fmt(z * l.se) + ", rhs " + fmt(r.estimate) + " +- " +
                      fmt(z * r.se));
    }

    // Var_N / Var_{N'} for consecutive entries; asserted only when the config registers a window
    for (std::size_t i = 0; i + 1 < c.N.size(); ++i) {
        Row q;
        q.quantity = "variance_ratio";
        q.label = std::to_string(c.N[i]) + "->" + std::to_string(c.N[i + 1]);
        q.N = c.N[i + 1];
        q.estimate = lhs_by_N[i] / lhs_by_N[i + 1];
        if (c.tolerances.count("ratio_min") && c.tolerances.count("ratio_max"))
            q.verdict = q.estimate >= c.tolerance("ratio_min", 1.5) && q.estimate <= c.tolerance("ratio_max", 3)
                            ? Verdict::Pass
                            : Verdict::Fail;
        rec.add(q);
    }
    return rec;
}

}  // namespace haarfree::harness
