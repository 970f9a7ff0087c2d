#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "haarfree/matrix_types.hpp"
#include "haarfree/polyalg/polynomial.hpp"

namespace haarfree::harness {

// Named generator for a deterministic matrix. Size is supplied at build time so that one
// recipe serves every N in a sweep.
struct MatrixRecipe {
    std::string name = "identity";  // identity | diag_pm1 | projection | haar
    double rank_fraction = 0.5;     // projection: rank = round(fraction * size), unless rank > 0
    long rank = 0;
    std::uint64_t seed = 0;         // haar
};

struct FunctionSpec {
    std::string family = "gaussian_bump";  // gaussian_bump | smoothed_lipschitz | resolvent | constant
    double center = 0;
    double width = 1;       // gaussian_bump
    double epsilon = 0.1;   // smoothed_lipschitz: smoothing scale
    double half_width = 1;  // smoothed_lipschitz: tent half-width
    cplx z{0, 1};           // resolvent
    double value = 1;       // constant
};

struct ExperimentConfig {
    std::string experiment;
    std::string polynomial;
    int p = 1;
    int q = 0;
    std::vector<long> N{16};
    long M = 1;
    std::vector<MatrixRecipe> Z;  // size N*M each; or
    std::vector<MatrixRecipe> Y;  // size M each, lifted as I_N (x) Y
    FunctionSpec f;
    double T = 1;
    double h = 1e-3;
    long replicas = 1000;
    std::vector<long> replicas_by_N;  // optional per-N override, aligned with N
    std::uint64_t seed = 1;
    std::string out = "out";
    int threads = 1;
    std::map<std::string, double> tolerances;
    nlohmann::json params = nlohmann::json::object();  // experiment-specific options

    long replicas_for(std::size_t n_index) const;
    double tolerance(const std::string& key, double fallback) const;
    double param(const std::string& key, double fallback) const;
    std::vector<double> param_list(const std::string& key, std::vector<double> fallback) const;

    poly::Polynomial parsed_polynomial() const;
    void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);

}  // namespace haarfree::harness
