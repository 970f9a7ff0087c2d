#include "haarfree/harness/records.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "haarfree/version.hpp"

namespace haarfree::harness {

namespace {

std::string num(double x) {
    if (std::isnan(x)) return "";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string quoted(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

nlohmann::json jnum(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
        case Verdict::Info: return "info";
    }
    return "info";
}

bool RunRecord::passed() const {
    for (const auto& r : rows)
        if (r.verdict == Verdict::Fail) return false;
    for (const auto& c : checks)
        if (c.verdict == Verdict::Fail) return false;
    return true;
}

const Check* RunRecord::find_check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

void write_results_csv(std::ostream& os, const RunRecord& r) {
    os << "experiment,quantity,label,N,M,parameter,estimate,se,reference,bound,verdict,seed,replicas\n";
    for (const auto& row : r.rows) {
        os << quoted(r.experiment) << ',' << quoted(row.quantity) << ',' << quoted(row.label) << ',' << row.N << ','
           << row.M << ',' << num(row.parameter) << ',' << num(row.estimate) << ',' << num(row.se) << ','
           << num(row.reference) << ',' << num(row.bound) << ',' << to_string(row.verdict) << ',' << row.seed
           << ',' << row.replicas << '\n';
    }
}

nlohmann::json summary_json(const RunRecord& r, const ExperimentConfig& c) {
    nlohmann::json j;
    j["experiment"] = r.experiment;
    j["version"] = std::string(version_string);
    j["config"] = config_to_json(c);
    j["passed"] = r.passed();
    j["checks"] = nlohmann::json::array();
    for (const auto& ch : r.checks)
        j["checks"].push_back({{"name", ch.name}, {"verdict", to_string(ch.verdict)}, {"detail", ch.detail}});
    j["rows"] = nlohmann::json::array();
    for (const auto& row : r.rows)
        j["rows"].push_back({{"quantity", row.quantity},
                             {"label", row.label},
                             {"N", row.N},
                             {"estimate", jnum(row.estimate)},
                             {"se", jnum(row.se)},
                             {"verdict", to_string(row.verdict)},
                             {"wall_seconds", row.wall_seconds},
                             {"seed", row.seed}});
    j["extra"] = r.extra;
    return j;
}

void write_outputs(const RunRecord& r, const ExperimentConfig& c) {
    std::filesystem::create_directories(c.out);
    const auto dir = std::filesystem::path(c.out);
    std::ofstream csv(dir / "results.csv");
    if (!csv) throw std::runtime_error("write_outputs: cannot write " + (dir / "results.csv").string());
    write_results_csv(csv, r);
    std::ofstream js(dir / "summary.json");
    if (!js) throw std::runtime_error("write_outputs: cannot write " + (dir / "summary.json").string());
    js << summary_json(r, c).dump(2) << '\n';
}

}  // namespace haarfree::harness
