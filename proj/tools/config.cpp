#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "handles.hpp"

namespace cli {

namespace {

[[noreturn]] void bad(const std::string& what)
{
    throw Failure(kExitConfig, "config: " + what);
}

const json& section(const json& config, const char* name)
{
    if (!config.contains(name) || !config.at(name).is_object()) bad(std::string("missing section '") + name + "'");
    return config.at(name);
}

double number(const json& obj, const char* key, const char* where)
{
    if (!obj.contains(key) || !obj.at(key).is_number())
        bad(std::string(where) + "." + key + " must be a number");
    return obj.at(key).get<double>();
}

std::size_t count(const json& obj, const char* key, const char* where)
{
    if (!obj.contains(key) || !obj.at(key).is_number_integer() || obj.at(key).get<long long>() < 0)
        bad(std::string(where) + "." + key + " must be a non-negative integer");
    return obj.at(key).get<std::size_t>();
}

} // namespace

json default_config()
{
    return json{
        {"model", {{"delta", 0.01}}},
        {"bath", {{"alpha", 0.5}, {"omega_c", 1.0}, {"lambda", 1.05}, {"num_modes", "auto"}}},
        {"solver", {{"N_max", 4}, {"grad_tol", 1e-9}, {"max_iters", 50000}, {"restarts", 4}, {"seed", 1},
                    {"trace", false}}},
        {"outputs", {{"directory", "polaron_out"}, {"which", {"coherence", "displacements"}}}},
        {"wigner", {{"omega", {0.5, 0.05}}, {"channels", {"diagonal", "off_diagonal"}}, {"N", {1, 4}},
                    {"points", 301}, {"moment_order", 0}}},
        {"thermal", {{"delta_list", {0.001, 0.01}}, {"t_min", 1e-7}, {"t_max", 1e-1}, {"points", 61}}},
        {"ed", {{"lambda", 4.0}, {"num_modes", 3}, {"fock_cutoff", 30}, {"N_max", 6}}},
    };
}

json load_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) bad("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        bad(path + ": " + e.what());
    }
}

void merge(json& base, const json& patch)
{
    if (!patch.is_object()) bad("top level must be an object");
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        if (it.value().is_object() && base.contains(it.key()) && base[it.key()].is_object())
            merge(base[it.key()], it.value());
        else
            base[it.key()] = it.value();
    }
    // alpha and alpha_list are alternatives; the most recent one wins
    if (patch.contains("bath") && patch["bath"].is_object()) {
        const json& pb = patch["bath"];
        json& b = base["bath"];
        if (pb.contains("alpha_list") && !pb.contains("alpha")) b.erase("alpha");
        if (pb.contains("alpha") && !pb.contains("alpha_list")) b.erase("alpha_list");
    }
}

void apply_overrides(json& config, const std::vector<std::string>& args)
{
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0) bad("unexpected argument '" + a + "'");
        std::string key = a.substr(2), text;
        const auto eq = key.find('=');
        if (eq != std::string::npos) {
            text = key.substr(eq + 1);
            key.resize(eq);
        } else {
            if (i + 1 >= args.size()) bad("flag --" + key + " needs a value");
            text = args[++i];
        }
        if (key.empty() || key.find('.') == std::string::npos) bad("unknown flag --" + key);

        json value;
        try {
            value = json::parse(text);
        } catch (const json::parse_error&) {
            value = text;
        }
        json patch = value;
        std::size_t end = key.size();
        while (true) {
            const auto dot = key.rfind('.', end - 1);
            const std::string part = key.substr(dot == std::string::npos ? 0 : dot + 1,
                                                end - (dot == std::string::npos ? 0 : dot + 1));
            if (part.empty()) bad("malformed flag --" + key);
            patch = json{{part, patch}};
            if (dot == std::string::npos) break;
            end = dot;
        }
        merge(config, patch);
    }
}

Settings resolve(const json& config)
{
    Settings s;
    const json& model = section(config, "model");
    s.delta = number(model, "delta", "model");

    const json& bath = section(config, "bath");
    if (bath.contains("alpha_list")) {
        if (!bath["alpha_list"].is_array() || bath["alpha_list"].empty())
            bad("bath.alpha_list must be a nonempty array");
        for (const json& a : bath["alpha_list"]) {
            if (!a.is_number()) bad("bath.alpha_list entries must be numbers");
            s.bath.alphas.push_back(a.get<double>());
        }
    } else {
        s.bath.alphas.push_back(number(bath, "alpha", "bath"));
    }
    s.bath.omega_c = number(bath, "omega_c", "bath");
    s.bath.lambda = number(bath, "lambda", "bath");
    if (bath.contains("num_modes") && bath["num_modes"].is_string()) {
        if (bath["num_modes"] != "auto") bad("bath.num_modes must be an integer or \"auto\"");
        s.bath.num_modes = 0;
    } else {
        s.bath.num_modes = count(bath, "num_modes", "bath");
        if (s.bath.num_modes == 0) bad("bath.num_modes must be positive");
    }

    const json& solver = section(config, "solver");
    s.solver.n_max = count(solver, "N_max", "solver");
    if (s.solver.n_max < 1) bad("solver.N_max must be at least 1");
    s.solver.grad_tol = number(solver, "grad_tol", "solver");
    s.solver.max_iters = count(solver, "max_iters", "solver");
    s.solver.restarts = count(solver, "restarts", "solver");
    s.solver.seed = count(solver, "seed", "solver");
    s.solver.trace = solver.contains("trace") && solver["trace"].is_boolean() && solver["trace"].get<bool>();

    const json& outputs = section(config, "outputs");
    if (!outputs.contains("directory") || !outputs["directory"].is_string()) bad("outputs.directory must be a string");
    s.directory = outputs["directory"].get<std::string>();
    if (outputs.contains("which")) {
        if (!outputs["which"].is_array()) bad("outputs.which must be an array");
        static const std::vector<std::string> known{"coherence", "displacements", "wigner", "thermal", "ed_check"};
        for (const json& w : outputs["which"]) {
            if (!w.is_string() || std::find(known.begin(), known.end(), w.get<std::string>()) == known.end())
                bad("outputs.which: unknown entry " + w.dump());
            s.which.push_back(w.get<std::string>());
        }
    }
    return s;
}

bool wants(const Settings& s, const std::string& output)
{
    return std::find(s.which.begin(), s.which.end(), output) != s.which.end();
}

} // namespace cli
