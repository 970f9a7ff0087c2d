#include <cmath>
#include <numbers>
#include <stdexcept>

#include "common.hpp"
#include "haarfree/freelimit/spectral.hpp"
#include "haarfree/harness/experiments.hpp"
#include "haarfree/harness/pool.hpp"
#include "haarfree/harness/stats.hpp"

namespace haarfree::harness {

using namespace detail;

namespace {

// tau(f(P)) with Z at its finite size and only the unitaries free.
double free_reference(const ExperimentConfig& c, const poly::Polynomial& P, const std::vector<ComplexMatrix>& Z,
                      const std::function<double(double)>& f, nlohmann::json& log) {
    if (c.f.family == "constant") return c.f.value;
    freelim::MomentEngine engine(assignment_for(c, Z));
    const int K = static_cast<int>(c.param("chebyshev_degree", 24));
    const double bound = norm_bound(P, Z);
    double R = c.param("spectral_radius", 0);
    if (!(R > 0)) {
        const auto ln = freelim::limit_norm(P, engine, static_cast<int>(c.param("norm_doublings", 5)));
        R = std::min(bound, std::max(1.05 * ln.estimate, 1.01 * ln.lower_bound));
        if (!(R > 0)) R = bound;
        log["limit_norm_estimate"] = ln.estimate;
        log["limit_norm_lower_bound"] = ln.lower_bound;
        log["limit_norm_budget_exceeded"] = ln.budget_exceeded;
    }
    log["norm_bound"] = bound;
    log["chebyshev_degree"] = K;
    try {
        log["spectral_radius"] = R;
        return freelim::tau_smooth(f, P, engine, R, K);
    } catch (const freelim::SpectralRadiusError&) {
        log["spectral_radius"] = bound;
        log["spectral_radius_fallback"] = true;
        return freelim::tau_smooth(f, P, engine, bound, K);
    }
}

// Lattice phases: replica sample j of k multiplies U_g by exp(2 pi i j a_g / k), a_g = s^g mod k.
std::vector<std::vector<cplx>> orbit_phases(int p, int k) {
    std::vector<std::vector<cplx>> out(static_cast<std::size_t>(k), std::vector<cplx>(static_cast<std::size_t>(p)));
    const long s = k > 4 ? 5 : 3;
    for (int j = 0; j < k; ++j) {
        long a = 1;
        for (int g = 0; g < p; ++g) {
            out[static_cast<std::size_t>(j)][static_cast<std::size_t>(g)] =
                std::polar(1.0, 2 * std::numbers::pi * static_cast<double>((j * a) % k) / k);
            a = (a * s) % k;
        }
    }
    return out;
}

}  // namespace

RunRecord run_master_scaling(const ExperimentConfig& c) {
    RunRecord rec;
    rec.experiment = "scaling";
    const poly::Polynomial P = c.parsed_polynomial();
    require_self_adjoint(P, "run_master_scaling");
    const auto f = real_function(c.f);
    const auto weights = fourier_weight(c.f);
    const int orbit = static_cast<int>(c.param("phase_orbit", 1));
    if (orbit < 1) throw std::invalid_argument("run_master_scaling: phase_orbit must be at least 1");
    const auto phases = orbit_phases(c.p, orbit);
    const double se_ratio = c.tolerance("inconclusive_se_ratio", 0.5);

    std::vector<double> Ms{static_cast<double>(c.M)};
    Ms = c.param_list("M_list", Ms);
    rec.extra["fourier_weights"] = weights;
    rec.extra["phase_orbit"] = orbit;
    rec.extra["reference"] = nlohmann::json::array();

    for (double Md : Ms) {
        ExperimentConfig cm = c;
        cm.M = static_cast<long>(Md);
        for (std::size_t i = 0; i < c.N.size(); ++i) {
            const long N = c.N[i];
            const auto Z = deterministic_tuple(cm, N);
            nlohmann::json log{{"N", N}, {"M", cm.M}};
            const double ref = free_reference(cm, P, Z, f, log);
            log["value"] = ref;
            rec.extra["reference"].push_back(log);

            const Stopwatch sw;
            const long R = c.replicas_for(i);
            const std::uint64_t seed = stream_seed(c.seed, kScaling, i * 1000 + static_cast<std::size_t>(cm.M));
            const auto acc = run_replicas<Accumulator>(
                R, c.threads, seed, [] { return Accumulator(); },
                [&](rmt::Philox& rng, long, Accumulator& a) {
                    auto U = haar_unitaries(c.p, N, rng);
                    double s = 0;
                    for (int j = 0; j < orbit; ++j) {
                        std::vector<ComplexMatrix> V = U;
                        if (orbit > 1)
                            for (int g = 0; g < c.p; ++g)
                                V[static_cast<std::size_t>(g)] *= phases[static_cast<std::size_t>(j)][static_cast<std::size_t>(g)];
                        const RealVector ev = sample_spectrum(P, V, cm.M, Z);
                        double t = 0;
                        for (Eigen::Index k = 0; k < ev.size(); ++k) t += f(ev(k));
                        s += t / static_cast<double>(ev.size());
                    }
                    a.add(s / orbit);
                });

            Row row;
            row.quantity = "delta";
            row.label = "mean=" + fmt(acc.mean());
            row.N = N;
            row.M = cm.M;
            row.estimate = std::abs(acc.mean() - ref);
            row.se = acc.stderr_mean();
            row.reference = ref;
            const double lnN = std::log(static_cast<double>(N));
            row.bound = static_cast<double>(cm.M * cm.M) / static_cast<double>(N * N) * lnN * lnN *
                        (weights[0] + weights[1]);
            if (c.f.family == "constant")
                row.verdict = row.estimate == 0 ? Verdict::Pass : Verdict::Fail;
            else
                row.verdict = row.se > se_ratio * row.estimate ? Verdict::Inconclusive : Verdict::Info;
            row.seed = seed;
            row.replicas = R;
            row.wall_seconds = sw.seconds();
            rec.add(row);
        }
    }

    if (c.f.family == "constant") return rec;

    // slope over the primary M
    std::vector<double> x, y, w, xa, ya;
    for (const auto& r : rec.rows) {
        if (r.M != c.M || !(r.estimate > 0)) continue;
        xa.push_back(std::log(static_cast<double>(r.N)));
        ya.push_back(std::log(r.estimate));
        if (r.verdict != Verdict::Info) continue;
        x.push_back(xa.back());
        y.push_back(ya.back());
        const double rel = r.se / r.estimate;
        w.push_back(1.0 / std::max(rel * rel, 1e-12));
    }
    const LinearFit all = ordinary_fit(xa, ya);
    rec.extra["all_rows_fit"] = {{"slope", all.slope}, {"intercept", all.intercept}, {"points", all.points}};
    const auto min_rows = static_cast<std::size_t>(c.param("min_conclusive_rows", 3));
    const double lo = c.tolerance("slope_min", -2.6), hi = c.tolerance("slope_max", -1.4);
    if (x.size() < min_rows) {
        rec.inconclusive("slope", "only " + std::to_string(x.size()) + " conclusive rows (need " +
                                      std::to_string(min_rows) + "); all-rows slope " + fmt(all.slope));
    } else {
        const LinearFit fit = weighted_fit(x, y, w);
        rec.extra["conclusive_fit"] = {{"slope", fit.slope},
                                       {"slope_se", fit.slope_se},
                                       {"intercept", fit.intercept},
                                       {"residual_rms", fit.residual_rms},
                                       {"points", fit.points}};
        rec.check("slope", fit.slope >= lo && fit.slope <= hi,
                  "slope " + fmt(fit.slope) + " +- " + fmt(fit.slope_se) + " over " + std::to_string(fit.points) +
                      " rows, window [" + fmt(lo) + ", " + fmt(hi) + "]");
    }

    // with Z = I_N (x) Y and commuting Y the error does not pick up a factor M^2
    if (Ms.size() > 1) {
        for (long N : c.N) {
            const Row* base = nullptr;
            for (const auto& r : rec.rows)
                if (r.N == N && r.M == static_cast<long>(Ms.front())) base = &r;
            for (const auto& r : rec.rows) {
                if (r.N != N || base == nullptr || &r == base) continue;
                const bool ok = r.estimate <= base->estimate + 3 * (r.se + base->se);
                rec.check("commuting_M_growth N=" + std::to_string(N) + " M=" + std::to_string(r.M), ok,
                          "delta " + fmt(r.estimate) + " vs " + fmt(base->estimate) + " at M=" + std::to_string(base->M));
            }
        }
    }
    return rec;
}

}  // namespace haarfree::harness
