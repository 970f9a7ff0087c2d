// haarfree <experiment> --config cfg.json [--seed S] [--out DIR] [--threads T]
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "haarfree/harness/experiments.hpp"
#include "haarfree/harness/records.hpp"
#include "haarfree/version.hpp"

namespace hh = haarfree::harness;

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> threads;
};

int run(const std::string& experiment, const Options& o) {
    hh::ExperimentConfig c = o.config.empty() ? hh::ExperimentConfig{} : hh::load_config(o.config);
    if (!c.experiment.empty() && c.experiment != experiment)
        std::cerr << "note: config names experiment '" << c.experiment << "', running '" << experiment << "'\n";
    c.experiment = experiment;
    if (o.seed) c.seed = *o.seed;
    if (o.out) c.out = *o.out;
    if (o.threads) c.threads = *o.threads;

    const hh::RunRecord r = hh::run_experiment(c);
    hh::write_outputs(r, c);

    for (const auto& row : r.rows) {
        if (row.verdict == hh::Verdict::Info) continue;
        std::cout << hh::to_string(row.verdict) << "  " << row.quantity;
        if (!row.label.empty()) std::cout << " [" << row.label << "]";
        std::cout << " N=" << row.N << " estimate=" << row.estimate << " se=" << row.se << '\n';
    }
    for (const auto& ch : r.checks)
        std::cout << hh::to_string(ch.verdict) << "  " << ch.name << (ch.detail.empty() ? "" : ": ") << ch.detail
                  << '\n';
    std::cout << (r.passed() ? "PASSED" : "FAILED") << "  results in " << c.out << '\n';
    return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-N versus free-limit experiments for polynomials in Haar unitaries"};
    app.set_version_flag("--version", haarfree::version_string);
    app.require_subcommand(1);

    Options o;
    for (const auto& name : hh::experiment_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", o.config, "JSON configuration")->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "master seed (overrides the config)");
        sub->add_option("--out", o.out, "output directory (overrides the config)");
        sub->add_option("--threads", o.threads, "worker threads (overrides the config)")
            ->check(CLI::PositiveNumber);
    }

    CLI11_PARSE(app, argc, argv);
    try {
        return run(app.get_subcommands().front()->get_name(), o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
