#include "haarfree/harness/config.hpp"

#include <fstream>
#include <stdexcept>

#include "haarfree/exprparse/parser.hpp"

namespace haarfree::harness {

using nlohmann::json;

namespace {

MatrixRecipe recipe_from_json(const json& j) {
    MatrixRecipe r;
    if (j.is_string()) {
        r.name = j.get<std::string>();
    } else {
        r.name = j.value("recipe", r.name);
        r.rank_fraction = j.value("rank_fraction", r.rank_fraction);
        r.rank = j.value("rank", r.rank);
        r.seed = j.value("seed", r.seed);
    }
    if (r.name != "identity" && r.name != "diag_pm1" && r.name != "projection" && r.name != "haar")
        throw std::invalid_argument("config: unknown matrix recipe '" + r.name + "'");
    return r;
}

json recipe_to_json(const MatrixRecipe& r) {
    json j{{"recipe", r.name}};
    if (r.name == "projection") {
        if (r.rank > 0)
            j["rank"] = r.rank;
        else
            j["rank_fraction"] = r.rank_fraction;
    }
    if (r.name == "haar") j["seed"] = r.seed;
    return j;
}

FunctionSpec function_from_json(const json& j) {
    FunctionSpec f;
    f.family = j.value("family", f.family);
    f.center = j.value("center", f.center);
    f.width = j.value("width", f.width);
    f.epsilon = j.value("epsilon", f.epsilon);
    f.half_width = j.value("half_width", f.half_width);
    f.value = j.value("value", f.value);
    if (j.contains("z")) {
        const auto& z = j.at("z");
        f.z = {z.at(0).get<double>(), z.at(1).get<double>()};
    }
    return f;
}

json function_to_json(const FunctionSpec& f) {
    json j{{"family", f.family}};
    if (f.family == "gaussian_bump") {
        j["center"] = f.center;
        j["width"] = f.width;
    } else if (f.family == "smoothed_lipschitz") {
        j["center"] = f.center;
        j["half_width"] = f.half_width;
        j["epsilon"] = f.epsilon;
    } else if (f.family == "resolvent") {
        j["z"] = {f.z.real(), f.z.imag()};
    } else if (f.family == "constant") {
        j["value"] = f.value;
    }
    return j;
}

}  // namespace

long ExperimentConfig::replicas_for(std::size_t n_index) const {
    if (!replicas_by_N.empty()) return replicas_by_N.at(n_index);
    return replicas;
}

double ExperimentConfig::tolerance(const std::string& key, double fallback) const {
    auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
}

double ExperimentConfig::param(const std::string& key, double fallback) const {
    return params.contains(key) ? params.at(key).get<double>() : fallback;
}

std::vector<double> ExperimentConfig::param_list(const std::string& key, std::vector<double> fallback) const {
    if (!params.contains(key)) return fallback;
    return params.at(key).get<std::vector<double>>();
}

poly::Polynomial ExperimentConfig::parsed_polynomial() const { return parse::parse(polynomial, p, q); }

void ExperimentConfig::validate() const {
    if (p < 0 || q < 0 || p + q < 1) throw std::invalid_argument("config: need p + q >= 1");
    if (N.empty()) throw std::invalid_argument("config: N list is empty");
    for (long n : N)
        if (n < 1) throw std::invalid_argument("config: every N must be at least 1");
    if (M < 1) throw std::invalid_argument("config: M must be at least 1");
    if (replicas < 1) throw std::invalid_argument("config: replicas must be at least 1");
    if (!replicas_by_N.empty()) {
        if (replicas_by_N.size() != N.size())
            throw std::invalid_argument("config: replicas_by_N must align with N");
        for (long r : replicas_by_N)
            if (r < 1) throw std::invalid_argument("config: replicas_by_N entries must be at least 1");
    }
    if (!Z.empty() && !Y.empty()) throw std::invalid_argument("config: give either Z or Y recipes, not both");
    const std::size_t given = Z.empty() ? Y.size() : Z.size();
    if (q > 0 && given != static_cast<std::size_t>(q))
        throw std::invalid_argument("config: need one Z (or Y) recipe per deterministic symbol");
    if (!(h > 0)) throw std::invalid_argument("config: h must be positive");
    if (T < 0) throw std::invalid_argument("config: T must be nonnegative");
    if (threads < 1) throw std::invalid_argument("config: threads must be at least 1");
    if (f.family != "gaussian_bump" && f.family != "smoothed_lipschitz" && f.family != "resolvent" &&
        f.family != "constant")
        throw std::invalid_argument("config: unknown function family '" + f.family + "'");
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    c.experiment = j.value("experiment", c.experiment);
    c.polynomial = j.value("polynomial", c.polynomial);
    c.p = j.value("p", c.p);
    c.q = j.value("q", c.q);
    if (j.contains("N")) {
        if (j.at("N").is_array())
            c.N = j.at("N").get<std::vector<long>>();
        else
            c.N = {j.at("N").get<long>()};
    }
    c.M = j.value("M", c.M);
    if (j.contains("Z"))
        for (const auto& r : j.at("Z")) c.Z.push_back(recipe_from_json(r));
    if (j.contains("Y"))
        for (const auto& r : j.at("Y")) c.Y.push_back(recipe_from_json(r));
    if (j.contains("f")) c.f = function_from_json(j.at("f"));
    c.T = j.value("T", c.T);
    c.h = j.value("h", c.h);
    c.replicas = j.value("replicas", c.replicas);
    if (j.contains("replicas_by_N")) c.replicas_by_N = j.at("replicas_by_N").get<std::vector<long>>();
    c.seed = j.value("seed", c.seed);
    c.out = j.value("out", c.out);
    c.threads = j.value("threads", c.threads);
    if (j.contains("tolerances")) c.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
    if (j.contains("params")) c.params = j.at("params");
    c.validate();
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["experiment"] = c.experiment;
    j["polynomial"] = c.polynomial;
    j["p"] = c.p;
    j["q"] = c.q;
    j["N"] = c.N;
    j["M"] = c.M;
    j["Z"] = json::array();
    for (const auto& r : c.Z) j["Z"].push_back(recipe_to_json(r));
    j["Y"] = json::array();
    for (const auto& r : c.Y) j["Y"].push_back(recipe_to_json(r));
    j["f"] = function_to_json(c.f);
    j["T"] = c.T;
    j["h"] = c.h;
    j["replicas"] = c.replicas;
    if (!c.replicas_by_N.empty()) j["replicas_by_N"] = c.replicas_by_N;
    j["seed"] = c.seed;
    j["out"] = c.out;
    j["threads"] = c.threads;
    j["tolerances"] = c.tolerances;
    j["params"] = c.params;
    return j;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("load_config: " + path + ": " + e.what());
    }
    return config_from_json(j);
}

}  // namespace haarfree::harness
