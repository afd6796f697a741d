#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace cli {

using nlohmann::json;

// Built-in defaults; a config file and dotted flags are merged on top.
json default_config();

// Reads a JSON document, throwing Failure(kExitConfig) on I/O or syntax errors.
json load_config_file(const std::string& path);

// Applies "--a.b.c=value" / "--a.b.c value" pairs. Values are parsed as JSON
// when they parse, otherwise taken as strings.
void apply_overrides(json& config, const std::vector<std::string>& args);

void merge(json& base, const json& patch);

struct SolverSettings {
    std::size_t n_max;
    double grad_tol;
    std::size_t max_iters;
    std::size_t restarts;
    std::uint64_t seed;
    bool trace;
};

struct BathSettings {
    std::vector<double> alphas;
    double omega_c;
    double lambda;
    std::size_t num_modes; // 0 means auto
};

struct Settings {
    double delta;
    BathSettings bath;
    SolverSettings solver;
    std::string directory;
    std::vector<std::string> which;
};

// Type-checks the merged document. Throws Failure(kExitConfig).
Settings resolve(const json& config);

bool wants(const Settings& s, const std::string& output);

} // namespace cli
