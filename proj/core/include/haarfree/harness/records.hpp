#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "haarfree/harness/config.hpp"

namespace haarfree::harness {

enum class Verdict { Pass, Fail, Inconclusive, Info };

std::string to_string(Verdict v);

// One measurement. Rows with Info carry data only; Inconclusive rows are excluded from
// pass/fail accounting.
struct Row {
    std::string quantity;
    std::string label;
    long N = 0;
    long M = 1;
    double parameter = std::numeric_limits<double>::quiet_NaN();
    double estimate = std::numeric_limits<double>::quiet_NaN();
    double se = std::numeric_limits<double>::quiet_NaN();
    double reference = std::numeric_limits<double>::quiet_NaN();
    double bound = std::numeric_limits<double>::quiet_NaN();
    Verdict verdict = Verdict::Info;
    double wall_seconds = 0;
    std::uint64_t seed = 0;
    long replicas = 0;
};

// A named assertion over several rows, e.g. a fitted slope inside a window.
struct Check {
    std::string name;
    Verdict verdict = Verdict::Info;
    std::string detail;
};

struct RunRecord {
    std::string experiment;
    std::vector<Row> rows;
    std::vector<Check> checks;
    nlohmann::json extra = nlohmann::json::object();  // fits and experiment-specific diagnostics

    Row& add(Row r) {
        rows.push_back(std::move(r));
        return rows.back();
    }
    void check(std::string name, bool ok, std::string detail = {}) {
        checks.push_back({std::move(name), ok ? Verdict::Pass : Verdict::Fail, std::move(detail)});
    }
    void inconclusive(std::string name, std::string detail) {
        checks.push_back({std::move(name), Verdict::Inconclusive, std::move(detail)});
    }
    // True when no row or check has verdict Fail.
    bool passed() const;
    const Check* find_check(const std::string& name) const;
};

// Deterministic columns only; wall time lives in summary.json so reruns give identical bytes.
void write_results_csv(std::ostream& os, const RunRecord& r);
nlohmann::json summary_json(const RunRecord& r, const ExperimentConfig& c);
// Writes results.csv and summary.json under c.out.
void write_outputs(const RunRecord& r, const ExperimentConfig& c);

}  // namespace haarfree::harness
