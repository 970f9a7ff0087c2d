#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>

#include "common.hpp"
#include "haarfree/freelimit/fubm_moments.hpp"
#include "haarfree/freelimit/spectral.hpp"
#include "haarfree/fubm/density.hpp"
#include "haarfree/harness/experiments.hpp"

namespace haarfree::harness {

using namespace detail;

namespace {

std::ofstream open_table(const ExperimentConfig& c, const std::string& name) {
    std::filesystem::create_directories(c.out);
    std::ofstream os(std::filesystem::path(c.out) / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + (std::filesystem::path(c.out) / name).string());
    return os;
}

Row exact_row(std::string quantity, double t, double estimate, double bound, bool ok) {
    Row r;
    r.quantity = std::move(quantity);
    r.parameter = t;
    r.estimate = estimate;
    r.se = 0;
    r.bound = bound;
    r.verdict = ok ? Verdict::Pass : Verdict::Fail;
    return r;
}

}  // namespace

RunRecord run_density(const ExperimentConfig& c) {
    RunRecord rec;
    rec.experiment = "density";
    const auto times = c.param_list("times", {5, 8, 12});
    const int grid = static_cast<int>(c.param("grid", 2048));
    const int n_max = static_cast<int>(c.param("n_max", 8));
    const double tol_norm = c.tolerance("normalization", 1e-8);
    const double tol_res = c.tolerance("residual", 1e-12);
    const double tol_sym = c.tolerance("symmetry", 1e-10);
    const double tol_mom = c.tolerance("moments", 1e-6);

    std::ofstream table;
    if (!c.out.empty()) {
        table = open_table(c, "density.csv");
        table << "t,theta,kappa\n";
    }
    for (double t : times) {
        const Stopwatch sw;
        const fubm::SpectralDensity d(t, grid);
        const auto& k = d.kappa();
        const auto n = k.size();

        rec.add(exact_row("max_residual", t, d.max_residual(), tol_res, d.max_residual() <= tol_res));
        const double norm_err = std::abs(d.normalization() - 1);
        rec.add(exact_row("normalization_error", t, norm_err, tol_norm, norm_err <= tol_norm));

        double asym = 0, below = 0, above = 0;
        bool positive = true;
        for (std::size_t j = 0; j < n; ++j) {
            asym = std::max(asym, std::abs(k[j] - k[(n - j) % n]));
            positive = positive && k[j] >= 0;
            if (k[j] <= 1)
                below = std::max(below, 1 - k[j]);
            else
                above = std::max(above, k[j] - 1);
        }
        rec.add(exact_row("symmetry_error", t, asym, tol_sym, asym <= tol_sym));
        rec.check("nonnegative t=" + fmt(t), positive);

        const auto m = d.moments(n_max);
        const auto ode = freelim::fubm_moments(n_max, t);
        double worst = 0;
        for (int j = 0; j <= n_max; ++j)
            worst = std::max(worst, std::abs(m[static_cast<std::size_t>(j)] - ode[static_cast<std::size_t>(j)]));
        rec.add(exact_row("moment_error", t, worst, tol_mom, worst <= tol_mom));

        const double drive = 2 * std::numbers::pi * d.sup_deviation();
        rec.add(exact_row("coupling_driver", t, drive, fubm::coupling_envelope(t), drive <= fubm::coupling_envelope(t)));
        rec.add(exact_row("deviation_below", t, below, fubm::deviation_bound(t), below <= fubm::deviation_bound(t)));
        rec.add(exact_row("deviation_above", t, above, fubm::upper_deviation_bound(t),
                          above <= fubm::upper_deviation_bound(t)));
        const double wall = sw.seconds();
        for (std::size_t r = rec.rows.size() - 7; r < rec.rows.size(); ++r) rec.rows[r].wall_seconds = wall;

        if (table.is_open()) {
            table.precision(17);
            for (std::size_t j = 0; j < n; ++j) table << t << ',' << d.theta()[j] << ',' << k[j] << '\n';
        }
    }
    return rec;
}

RunRecord run_moments(const ExperimentConfig& c) {
    RunRecord rec;
    rec.experiment = "moments";
    const int k_max = static_cast<int>(c.param("k_max", 12));
    const int doublings = static_cast<int>(c.param("norm_doublings", 6));
    const long N = c.N.front();
    const auto Z = deterministic_tuple(c, N);

    if (!c.polynomial.empty()) {
        const poly::Polynomial P = c.parsed_polynomial();
        freelim::MomentEngine engine(assignment_for(c, Z));
        const auto m = freelim::power_moments(P, engine, k_max);
        for (std::size_t k = 0; k < m.size(); ++k) {
            Row r;
            r.quantity = "moment";
            r.label = "im=" + fmt(m[k].imag());
            r.N = Z.empty() ? 0 : N;
            r.M = c.M;
            r.parameter = static_cast<double>(k);
            r.estimate = m[k].real();
            r.se = 0;
            rec.add(r);
        }
        if (!c.out.empty()) {
            auto os = open_table(c, "moments.csv");
            freelim::write_moment_table(os, m);
        }
        const auto ln = freelim::limit_norm(P, engine, doublings);
        for (std::size_t j = 0; j < ln.sequence.size(); ++j) {
            Row r;
            r.quantity = "norm_sequence";
            r.N = Z.empty() ? 0 : N;
            r.M = c.M;
            r.parameter = static_cast<double>(j);
            r.estimate = ln.sequence[j];
            r.se = 0;
            rec.add(r);
        }
        rec.extra["limit_norm"] = {{"estimate", ln.estimate},
                                   {"lower_bound", ln.lower_bound},
                                   {"budget_exceeded", ln.budget_exceeded}};
    }

    const auto fubm_times = c.param_list("fubm_times", {});
    if (!fubm_times.empty()) {
        const int n_max = static_cast<int>(c.param("fubm_n_max", 8));
        for (double t : fubm_times) {
            const auto m = freelim::fubm_moments(n_max, t);
            for (int n = 0; n <= n_max; ++n) {
                Row r;
                r.quantity = "fubm_moment";
                r.label = "n=" + std::to_string(n);
                r.parameter = t;
                r.estimate = m[static_cast<std::size_t>(n)];
                r.se = 0;
                rec.add(r);
            }
        }
        if (!c.out.empty()) {
            auto os = open_table(c, "fubm_moments.csv");
            freelim::write_fubm_table(os, n_max, fubm_times);
        }
    }
    return rec;
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"scaling",    "stieltjes", "dlu",     "variance", "concentration",
                                                "strongconv", "identity",  "density", "moments"};
    return names;
}

RunRecord run_experiment(const ExperimentConfig& c) {
    static const std::map<std::string, std::function<RunRecord(const ExperimentConfig&)>> table{
        {"scaling", run_master_scaling},
        {"stieltjes", run_stieltjes},
        {"dlu", run_dlu},
        {"variance", run_variance_identity},
        {"concentration", run_concentration},
        {"strongconv", run_strong_convergence},
        {"identity", run_identity_checks},
        {"density", run_density},
        {"moments", run_moments},
    };
    c.validate();
    const auto it = table.find(c.experiment);
    if (it == table.end()) throw std::invalid_argument("unknown experiment '" + c.experiment + "'");
    return it->second(c);
}

}  // namespace haarfree::harness
