#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "common.hpp"
#include "haarfree/freelimit/spectral.hpp"
#include "haarfree/harness/experiments.hpp"
#include "haarfree/harness/pool.hpp"
#include "haarfree/harness/stats.hpp"
#include "haarfree/rmt/measure.hpp"
#include "haarfree/rmt/spectral.hpp"

namespace haarfree::harness {

using namespace detail;

namespace {

std::vector<cplx> z_grid(const ExperimentConfig& c) {
    std::vector<cplx> out;
    const auto it = c.params.find("z");
    if (it == c.params.end()) return {cplx(0, 3)};
    for (const auto& z : *it) {
        if (z.is_array() && z.size() == 2)
            out.emplace_back(z[0].get<double>(), z[1].get<double>());
        else
            out.emplace_back(0, z.get<double>());
    }
    return out;
}

struct EigenBatches {
    std::vector<std::vector<double>> batches;
    explicit EigenBatches(std::size_t n = 0) : batches(n) {}
    void merge(const EigenBatches& o) {
        if (batches.empty()) batches.resize(o.batches.size());
        for (std::size_t b = 0; b < batches.size(); ++b)
            batches[b].insert(batches[b].end(), o.batches[b].begin(), o.batches[b].end());
    }
};

// decreasing up to the reported errors: g_{k+1} < g_k + se_k + se_{k+1}
void decreasing_check(RunRecord& rec, const std::string& name, const std::vector<const Row*>& rows) {
    if (rows.size() < 2) return;
    bool ok = true;
    std::string detail;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
        const Row& a = *rows[k];
        const Row& b = *rows[k + 1];
        ok = ok && b.estimate < a.estimate + a.se + b.se;
        detail += "N=" + std::to_string(a.N) + ":" + fmt(a.estimate) + " ";
    }
    detail += "N=" + std::to_string(rows.back()->N) + ":" + fmt(rows.back()->estimate);
    rec.check(name, ok, detail);
}

}  // namespace

rmt::DiscreteMeasure kpm_measure(const std::vector<double>& mu, double R) {
    if (mu.empty()) throw std::invalid_argument("kpm_measure: need at least one moment");
    if (!(R > 0)) throw std::invalid_argument("kpm_measure: R must be positive");
    const std::size_t K = mu.size() - 1;
    const double a = std::numbers::pi / static_cast<double>(K + 1);
    std::vector<double> g(K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
        const double kk = static_cast<double>(k);
        g[k] = ((static_cast<double>(K) - kk + 1) * std::cos(a * kk) + std::sin(a * kk) / std::tan(a)) /
               static_cast<double>(K + 1);
    }
    const std::size_t n = 4 * std::max<std::size_t>(K, 1);
    rmt::DiscreteMeasure out;
    out.points.resize(n);
    out.weights.resize(n);
    double total = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double th = std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
        const double c1 = std::cos(th);
        double prev = 1, cur = c1, s = g[0] * mu[0];
        for (std::size_t k = 1; k <= K; ++k) {
            s += 2 * g[k] * mu[k] * cur;
            const double next = 2 * c1 * cur - prev;
            prev = cur;
            cur = next;
        }
        out.points[j] = R * c1;
        out.weights[j] = std::max(s, 0.0);
        total += out.weights[j];
    }
    for (double& w : out.weights) w /= total;
    // ascending points
    std::reverse(out.points.begin(), out.points.end());
    std::reverse(out.weights.begin(), out.weights.end());
    return out;
}

double hausdorff_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff_distance: empty set");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    auto directed = [](const std::vector<double>& from, const std::vector<double>& to) {
        double d = 0;
        for (double x : from) {
            const auto it = std::lower_bound(to.begin(), to.end(), x);
            double best = std::numeric_limits<double>::infinity();
            if (it != to.end()) best = *it - x;
            if (it != to.begin()) best = std::min(best, x - *std::prev(it));
            d = std::max(d, best);
        }
        return d;
    };
    return std::max(directed(a, b), directed(b, a));
}

RunRecord run_stieltjes(const ExperimentConfig& c) {
    RunRecord rec;
    rec.experiment = "stieltjes";
    const poly::Polynomial P = c.parsed_polynomial();
    require_self_adjoint(P, "run_stieltjes");
    const auto zs = z_grid(c);
    const int K = static_cast<int>(c.param("moment_degree", 400));
    const double margin = c.param("annulus_margin", 0.05);
    const auto check_N = static_cast<long>(c.param("gap_check_N", 64));
    const double tol = c.tolerance("stieltjes_gap", 0.01);
    rec.extra["limit"] = nlohmann::json::array();

    std::vector<std::vector<const Row*>> by_z(zs.size());
    std::vector<std::vector<std::size_t>> idx(zs.size());
    for (std::size_t i = 0; i < c.N.size(); ++i) {
        const long N = c.N[i];
        const auto Z = deterministic_tuple(c, N);
        const double B = norm_bound(P, Z);
        for (const cplx z : zs)
            if (std::abs(z) <= B * (1 + margin))
                throw std::invalid_argument("run_stieltjes: |z| = " + fmt(std::abs(z)) +
                                            " lies inside the annulus where the moment series is not certified (bound " +
                                            fmt(B) + ")");
        freelim::MomentEngine engine(assignment_for(c, Z));
        const auto m = freelim::power_moments(P, engine, K);

        std::vector<cplx> G(zs.size());
        for (std::size_t a = 0; a < zs.size(); ++a) {
            cplx s = 0, zp = 1.0 / zs[a];
            for (int k = 0; k <= K; ++k) {
                s += m[static_cast<std::size_t>(k)] * zp;
                zp /= zs[a];
            }
            G[a] = s;
            const double r = B / std::abs(zs[a]);
            const double tail = std::pow(r, K + 1) / std::abs(zs[a]) / (1 - r);
            rec.extra["limit"].push_back(
                {{"N", N}, {"z", {zs[a].real(), zs[a].imag()}}, {"G", {s.real(), s.imag()}}, {"tail_bound", tail}});
        }

        const Stopwatch sw;
        const long R = c.replicas_for(i);
        const std::uint64_t seed = stream_seed(c.seed, kStieltjes, i);
        // slots: (re, im) at z, then (re, im) at conj z
        const auto bank = run_replicas<AccumulatorBank>(
            R, c.threads, seed, [&] { return AccumulatorBank(4 * zs.size()); },
            [&](rmt::Philox& rng, long, AccumulatorBank& acc) {
                const auto U = haar_unitaries(c.p, N, rng);
                const RealVector ev = sample_spectrum(P, U, c.M, Z);
                for (std::size_t a = 0; a < zs.size(); ++a) {
                    const cplx g = rmt::resolvent_trace(ev, zs[a]);
                    const cplx gc = rmt::resolvent_trace(ev, std::conj(zs[a]));
                    acc[4 * a].add(g.real());
                    acc[4 * a + 1].add(g.imag());
                    acc[4 * a + 2].add(gc.real());
                    acc[4 * a + 3].add(gc.imag());
                }
            });
        const double wall = sw.seconds() / static_cast<double>(zs.size());

        for (std::size_t a = 0; a < zs.size(); ++a) {
            const cplx mean(bank[4 * a].mean(), bank[4 * a + 1].mean());
            const cplx mean_c(bank[4 * a + 2].mean(), bank[4 * a + 3].mean());
            const double se = std::hypot(bank[4 * a].stderr_mean(), bank[4 * a + 1].stderr_mean());
            Row row;
            row.quantity = "stieltjes_gap";
            row.label = "z=" + fmt_complex(zs[a]);
            row.N = N;
            row.M = c.M;
            row.parameter = zs[a].imag();
            row.estimate = std::abs(mean - G[a]);
            row.se = se;
            row.reference = std::abs(G[a]);
            const double y = std::abs(zs[a].imag());
            row.bound = static_cast<double>(c.M * c.M) / static_cast<double>(N * N) * (1 / std::pow(y, 5) + 1 / (y * y));
            row.seed = seed;
            row.replicas = R;
            row.wall_seconds = wall;
            if (N == check_N) row.verdict = row.estimate <= tol ? Verdict::Pass : Verdict::Fail;
            idx[a].push_back(rec.rows.size());
            rec.add(row);

            const double gap_c = std::abs(mean_c - std::conj(G[a]));
            rec.check("conjugate_symmetry N=" + std::to_string(N) + " z=" + fmt_complex(zs[a]),
                      std::abs(gap_c - row.estimate) <= 1e-12 * std::max(1.0, row.estimate),
                      "gap " + fmt(row.estimate) + " vs " + fmt(gap_c));
        }
    }
    for (std::size_t a = 0; a < zs.size(); ++a) {
        std::vector<const Row*> rows;
        for (std::size_t k : idx[a]) rows.push_back(&rec.rows[k]);
        decreasing_check(rec, "decreasing z=" + fmt_complex(zs[a]), rows);
    }
    return rec;
}

RunRecord run_dlu(const ExperimentConfig& c) {
    RunRecord rec;
    rec.experiment = "dlu";
    const poly::Polynomial P = c.parsed_polynomial();
    require_self_adjoint(P, "run_dlu");
    const int K = static_cast<int>(c.param("kpm_degree", 1024));
    const auto batches = static_cast<std::size_t>(c.param("dlu_batches", 8));
    const int grid = static_cast<int>(c.param("dlu_grid", 16384));
    if (batches < 2) throw std::invalid_argument("run_dlu: dlu_batches must be at least 2");
    rec.extra["reference"] = nlohmann::json::array();

    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < c.N.size(); ++i) {
        const long N = c.N[i];
        const auto Z = deterministic_tuple(c, N);
        freelim::MomentEngine engine(assignment_for(c, Z));
        double R = c.param("spectral_radius", 0);
        if (!(R > 0)) {
            const auto ln = freelim::limit_norm(P, engine, static_cast<int>(c.param("norm_doublings", 5)));
            R = std::min(norm_bound(P, Z), std::max(1.05 * ln.estimate, 1.01 * ln.lower_bound));
        }
        const auto mu = freelim::chebyshev_moments(P, engine, R, K);
        const rmt::DiscreteMeasure limit = kpm_measure(mu, R);
        rec.extra["reference"].push_back({{"N", N}, {"spectral_radius", R}, {"kpm_degree", K}});

        const Stopwatch sw;
        const long reps = c.replicas_for(i);
        const std::uint64_t seed = stream_seed(c.seed, kDlu, i);
        const auto pooled = run_replicas<EigenBatches>(
            reps, c.threads, seed, [&] { return EigenBatches(batches); },
            [&](rmt::Philox& rng, long k, EigenBatches& acc) {
                const auto U = haar_unitaries(c.p, N, rng);
                const RealVector ev = sample_spectrum(P, U, c.M, Z);
                auto& b = acc.batches[static_cast<std::size_t>(k) % batches];
                b.insert(b.end(), ev.data(), ev.data() + ev.size());
            });

        std::vector<double> all;
        Accumulator spread;
        for (const auto& b : pooled.batches) {
            if (b.empty()) continue;
            all.insert(all.end(), b.begin(), b.end());
            spread.add(rmt::bl_distance(rmt::EmpiricalMeasure(b).as_discrete(), limit, grid));
        }
        Row row;
        row.quantity = "dlu_gap";
        row.N = N;
        row.M = c.M;
        row.estimate = rmt::bl_distance(rmt::EmpiricalMeasure(std::move(all)).as_discrete(), limit, grid);
        // batch measures hold 1/B of the samples, so their spread overstates the pooled error by sqrt(B)
        row.se = std::sqrt(spread.variance() / static_cast<double>(batches));
        const double lnN = std::log(static_cast<double>(N));
        row.bound = static_cast<double>(c.M * c.M) * std::cbrt(lnN / static_cast<double>(N));
        row.seed = seed;
        row.replicas = reps;
        row.wall_seconds = sw.seconds();
        idx.push_back(rec.rows.size());
        rec.add(row);
    }
    std::vector<const Row*> rows;
    for (std::size_t k : idx) rows.push_back(&rec.rows[k]);
    decreasing_check(rec, "decreasing", rows);
    return rec;
}

}  // namespace haarfree::harness
