#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "common.hpp"
#include "haarfree/freelimit/spectral.hpp"
#include "haarfree/harness/experiments.hpp"
#include "haarfree/harness/pool.hpp"
#include "haarfree/harness/stats.hpp"

namespace haarfree::harness {

using namespace detail;

namespace {

struct Samples {
    std::vector<double> values;
    void merge(const Samples& o) { values.insert(values.end(), o.values.begin(), o.values.end()); }
};

// C with |P(X) - P(Y)| <= C sum_i ||X_i - Y_i|| in operator norm: every occurrence of U_i in a
// term contributes |c| times the norms of the other letters.
double lipschitz_constant(const poly::Polynomial& P, const std::vector<ComplexMatrix>& Z, int p) {
    std::vector<double> norms;
    for (const auto& z : Z) norms.push_back(z.operatorNorm());
    std::vector<double> per_letter(static_cast<std::size_t>(p), 0.0);
    for (const auto& [m, c] : P.terms()) {
        double rest = std::abs(c);
        for (const auto& l : m.letters())
            if (!l.is_unitary()) rest *= norms[static_cast<std::size_t>(l.index - p - 1)];
        for (const auto& l : m.letters())
            if (l.is_unitary()) per_letter[static_cast<std::size_t>(l.index - 1)] += rest;
    }
    return *std::max_element(per_letter.begin(), per_letter.end());
}

}  // namespace

RunRecord run_concentration(const ExperimentConfig& c) {
    RunRecord rec;
    rec.experiment = "concentration";
    const poly::Polynomial P = c.parsed_polynomial();
    require_self_adjoint(P, "run_concentration");
    const double delta_max = c.param("delta_max", 1.0);
    std::vector<double> grid;
    for (int k = 0; k < 10; ++k) grid.push_back(delta_max * k / 9.0);
    grid = c.param_list("deltas", grid);

    for (std::size_t i = 0; i < c.N.size(); ++i) {
        const long N = c.N[i];
        const auto Z = deterministic_tuple(c, N);
        const double C = lipschitz_constant(P, Z, c.p);
        if (!(C > 0)) throw std::invalid_argument("run_concentration: polynomial has no unitary letters");
        rec.extra["lipschitz_constant"][std::to_string(N)] = C;

        const Stopwatch sw;
        const long R = c.replicas_for(i);
        const std::uint64_t seed = stream_seed(c.seed, kConcentration, i);
        const auto s = run_replicas<Samples>(
            R, c.threads, seed, [] { return Samples(); },
            [&](rmt::Philox& rng, long, Samples& acc) {
                const RealVector ev = sample_spectrum(P, haar_unitaries(c.p, N, rng), c.M, Z);
                acc.values.push_back(std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff())));
            });
        Accumulator mean;
        for (double v : s.values) mean.add(v);
        const double wall = sw.seconds() / static_cast<double>(grid.size());
        double max_dev = 0;
        for (double v : s.values) max_dev = std::max(max_dev, std::abs(v - mean.mean()));
        rec.extra["norm_mean"][std::to_string(N)] = mean.mean();
        rec.extra["max_deviation"][std::to_string(N)] = max_dev;

        for (double d : grid) {
            long hits = 0;
            for (double v : s.values) hits += std::abs(v - mean.mean()) >= d;
            const double n = static_cast<double>(s.values.size());
            const double tail = static_cast<double>(hits) / n;
            const double se = std::sqrt(tail * (1 - tail) / n);
            const double x = d / (2.0 * c.p * C);
            const double env = std::min(1.0, 4.0 * c.p * std::exp(-x * x * static_cast<double>(N)));
            Row row;
            row.quantity = "tail";
            row.N = N;
            row.M = c.M;
            row.parameter = d;
            row.estimate = tail;
            row.se = se;
            row.bound = env;
            row.verdict = tail <= env + 3 * se ? Verdict::Pass : Verdict::Fail;
            row.seed = seed;
            row.replicas = R;
            row.wall_seconds = wall;
            rec.add(row);
        }
    }
    return rec;
}

RunRecord run_strong_convergence(const ExperimentConfig& c) {
    RunRecord rec;
    rec.experiment = "strongconv";
    const poly::Polynomial P = c.parsed_polynomial();
    require_self_adjoint(P, "run_strong_convergence");
    const int doublings = static_cast<int>(c.param("norm_doublings", 8));
    const long check_N = static_cast<long>(c.param("edge_check_N", static_cast<double>(c.N.back())));
    const auto inversions_allowed = static_cast<long>(c.param("allowed_inversions", 1));
    const int K = static_cast<int>(c.param("kpm_degree", 512));
    const double threshold = c.param("support_threshold", 1e-3);
    const double tol = c.tolerance("edge", 0.05);

    std::vector<std::size_t> edge_rows;
    for (std::size_t i = 0; i < c.N.size(); ++i) {
        const long N = c.N[i];
        const auto Z = deterministic_tuple(c, N);
        freelim::MomentEngine engine(assignment_for(c, Z));
        // shifted by the norm bound, the largest eigenvalue is the norm
        const double B = norm_bound(P, Z);
        const auto one = poly::Polynomial::one(P.alphabet());
        const auto top = freelim::limit_norm(P + one * cplx(B), engine, doublings);
        const auto bottom = freelim::limit_norm(one * cplx(B) - P, engine, doublings);
        const bool estimate_only = top.budget_exceeded || bottom.budget_exceeded;
        const double lmax = (estimate_only ? top.lower_bound : top.estimate) - B;
        const double lmin = B - (estimate_only ? bottom.lower_bound : bottom.estimate);

        const double R = std::max(std::abs(lmax), std::abs(lmin)) * 1.05;
        const auto kpm = kpm_measure(freelim::chebyshev_moments(P, engine, R, K), R);
        const double wmax = *std::max_element(kpm.weights.begin(), kpm.weights.end());
        std::vector<double> support;
        for (std::size_t k = 0; k < kpm.points.size(); ++k)
            if (kpm.weights[k] > threshold * wmax) support.push_back(kpm.points[k]);

        const Stopwatch sw;
        const long reps = c.replicas_for(i);
        const std::uint64_t seed = stream_seed(c.seed, kStrong, i);
        const auto bank = run_replicas<AccumulatorBank>(
            reps, c.threads, seed, [] { return AccumulatorBank(3); },
            [&](rmt::Philox& rng, long, AccumulatorBank& acc) {
                const RealVector ev = sample_spectrum(P, haar_unitaries(c.p, N, rng), c.M, Z);
                acc[0].add(ev.maxCoeff());
                acc[1].add(ev.minCoeff());
                acc[2].add(hausdorff_distance(std::vector<double>(ev.data(), ev.data() + ev.size()), support));
            });
        const double wall = sw.seconds() / 3;
        const std::string tag = estimate_only ? "estimate_only" : "";

        Row hi;
        hi.quantity = "lambda_max";
        hi.label = tag;
        hi.N = N;
        hi.M = c.M;
        hi.estimate = bank[0].mean();
        hi.se = bank[0].stderr_mean();
        hi.reference = lmax;
        hi.bound = tol;
        hi.seed = seed;
        hi.replicas = reps;
        hi.wall_seconds = wall;
        if (N == check_N && !estimate_only)
            hi.verdict = std::abs(hi.estimate - lmax) <= tol ? Verdict::Pass : Verdict::Fail;
        edge_rows.push_back(rec.rows.size());
        rec.add(hi);

        Row lo = hi;
        lo.quantity = "lambda_min";
        lo.estimate = bank[1].mean();
        lo.se = bank[1].stderr_mean();
        lo.reference = lmin;
        lo.verdict = Verdict::Info;
        rec.add(lo);

        Row h = hi;
        h.quantity = "hausdorff";
        h.estimate = bank[2].mean();
        h.se = bank[2].stderr_mean();
        h.reference = std::numeric_limits<double>::quiet_NaN();
        h.bound = std::numeric_limits<double>::quiet_NaN();
        h.verdict = Verdict::Info;
        rec.add(h);

        rec.extra["limit"][std::to_string(N)] = {{"lambda_max", lmax},
                                                 {"lambda_min", lmin},
                                                 {"top_sequence", top.sequence},
                                                 {"estimate_only", estimate_only},
                                                 {"support_points", support.size()}};
    }

    if (edge_rows.size() >= 2) {
        long inversions = 0;
        std::string detail;
        for (std::size_t k = 0; k < edge_rows.size(); ++k) {
            const Row& r = rec.rows[edge_rows[k]];
            const double gap = std::abs(r.estimate - r.reference);
            detail += "N=" + std::to_string(r.N) + ":" + fmt(gap) + " ";
            if (k > 0) {
                const Row& q = rec.rows[edge_rows[k - 1]];
                inversions += gap >= std::abs(q.estimate - q.reference);
            }
        }
        rec.check("edge_trend", inversions <= inversions_allowed,
                  detail + "inversions " + std::to_string(inversions));
    }
    return rec;
}

}  // namespace haarfree::harness
