#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <thread>

#include "handles.hpp"
#include "output.hpp"

namespace cli {

namespace fs = std::filesystem;

namespace {

struct Rung {
    std::size_t n = 0;
    double energy = 0.0;
    double coherence = 0.0; // <sigma_x>
    double grad_norm = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::string diagnostics;
    State state;
    std::string report;
    std::vector<std::size_t> trace_iteration;
    std::vector<double> trace_energy;
    std::vector<double> trace_grad;
};

struct Ladder {
    double alpha = 0.0;
    Bath bath;
    double delta_r = 0.0;
    std::vector<Rung> rungs;
};

// Runs fn(0..count-1) on up to `jobs` threads. Results land in caller-owned
// slots indexed by i, so the output order never depends on scheduling.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn)
{
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, count));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::vector<std::string> header(const RunContext& ctx, const std::string& command,
                                const std::vector<std::string>& extra = {})
{
    std::vector<std::string> h{std::string("polaron ") + polaron_version(), "command = " + command,
                               "config = " + ctx.config.dump()};
    h.insert(h.end(), extra.begin(), extra.end());
    return h;
}

std::string kv(const std::string& key, double v)
{
    return key + " = " + fmt(v);
}

std::string kv(const std::string& key, std::size_t v)
{
    return key + " = " + std::to_string(v);
}

Bath make_bath(const Settings& s, double alpha, double delta)
{
    std::size_t m = s.bath.num_modes;
    if (m == 0) check(polaron_auto_num_modes(alpha, s.bath.omega_c, s.bath.lambda, delta, &m), "bath");
    polaron_bath* b = nullptr;
    check(polaron_bath_discretize(alpha, s.bath.omega_c, s.bath.lambda, m, &b), "bath");
    return Bath(b);
}

polaron_optimizer_config optimizer_config(const SolverSettings& s)
{
    polaron_optimizer_config c{};
    check(polaron_optimizer_config_default(&c), "optimizer");
    c.grad_tol = s.grad_tol;
    c.max_iters = s.max_iters;
    c.num_restarts = s.restarts;
    c.seed = s.seed;
    c.record_trace = s.trace ? 1 : 0;
    return c;
}

Rung make_rung(const polaron_report* report, bool trace)
{
    Rung r;
    const polaron_report_summary sm = summary(report);
    r.n = sm.num_polarons;
    r.energy = sm.energy;
    r.grad_norm = sm.grad_norm;
    r.iterations = sm.iterations;
    r.converged = sm.converged != 0;
    r.diagnostics = polaron_report_diagnostics(report);
    r.state = report_state(report);
    check(polaron_coherence(r.state.get(), &r.coherence), "coherence");
    r.report = report_json(report);
    if (trace) {
        std::size_t count = 0;
        check(polaron_report_trace(report, nullptr, nullptr, nullptr, 0, &count), "trace");
        r.trace_iteration.resize(count);
        r.trace_energy.resize(count);
        r.trace_grad.resize(count);
        if (count > 0)
            check(polaron_report_trace(report, r.trace_iteration.data(), r.trace_energy.data(), r.trace_grad.data(),
                                       count, &count),
                  "trace");
    }
    return r;
}

// Silbey-Harris start, optimize at N = 1, then grow one row at a time.
Ladder run_ladder(const Settings& s, Bath bath, double alpha, double delta, std::size_t n_max)
{
    Ladder out;
    out.alpha = alpha;
    out.bath = std::move(bath);
    const polaron_optimizer_config cfg = optimizer_config(s.solver);

    polaron_state* seed = nullptr;
    check(polaron_sh_solve(out.bath.get(), delta, &seed, &out.delta_r), "silbey-harris");
    State seed_state(seed);

    polaron_report* rep = nullptr;
    check(polaron_optimize(seed_state.get(), out.bath.get(), delta, &cfg, &rep), "optimize");
    Report current(rep);
    out.rungs.push_back(make_rung(current.get(), s.solver.trace));
    while (out.rungs.size() < n_max) {
        polaron_report* grown = nullptr;
        check(polaron_grow(current.get(), out.bath.get(), delta, &cfg, &grown), "grow");
        current.reset(grown);
        out.rungs.push_back(make_rung(current.get(), s.solver.trace));
    }
    return out;
}

std::vector<Ladder> solve_all(const RunContext& ctx, std::size_t n_max)
{
    const Settings& s = ctx.settings;
    std::vector<Ladder> ladders(s.bath.alphas.size());
    parallel_for(ladders.size(), ctx.jobs, [&](std::size_t i) {
        const double alpha = s.bath.alphas[i];
        ladders[i] = run_ladder(s, make_bath(s, alpha, s.delta), alpha, s.delta, n_max);
    });
    return ladders;
}

std::string alpha_tag(const Settings& s, double alpha)
{
    return s.bath.alphas.size() > 1 ? "_alpha_" + tag(alpha) : "";
}

bool all_converged(const std::vector<Ladder>& ladders)
{
    for (const auto& l : ladders)
        for (const auto& r : l.rungs)
            if (!r.converged) return false;
    return true;
}

std::vector<std::string> bath_lines(const Ladder& l)
{
    double alpha = 0, omega_c = 0, lambda = 0;
    check(polaron_bath_info(l.bath.get(), &alpha, &omega_c, &lambda), "bath");
    std::size_t m = 0;
    check(polaron_bath_num_modes(l.bath.get(), &m), "bath");
    return {kv("alpha", alpha), kv("omega_c", omega_c), kv("lambda", lambda), kv("M", m)};
}

void write_solve_outputs(const RunContext& ctx, const std::vector<Ladder>& ladders)
{
    const Settings& s = ctx.settings;
    const fs::path dir = s.directory;

    if (wants(s, "coherence")) {
        CsvWriter csv(dir / "coherence.csv",
                      header(ctx, "solve", {kv("delta", s.delta), "coherence = -<sigma_x>",
                                            "delta_R_SH = Delta exp(-2 sum_k f_k^2) at the Silbey-Harris fixed point"}),
                      {"alpha", "N", "energy", "coherence", "delta_R_SH", "flag"});
        for (const auto& l : ladders)
            for (const auto& r : l.rungs)
                csv.row({fmt(l.alpha), std::to_string(r.n), fmt(r.energy), fmt(-r.coherence), fmt(l.delta_r),
                         r.converged ? "ok" : "nonconverged"});
    }

    if (wants(s, "displacements")) {
        for (const auto& l : ladders) {
            const Rung& last = l.rungs.back();
            const StateView v = view(last.state.get());
            const auto modes = bath_modes(l.bath.get());
            auto extra = bath_lines(l);
            extra.push_back(kv("delta", s.delta));
            extra.push_back(kv("N", v.num_polarons));
            extra.push_back("n, k are 1-based; modes ordered by decreasing omega");
            std::string weights = "C =";
            for (double c : v.weights) weights += " " + fmt(c);
            extra.push_back(weights);
            CsvWriter csv(dir / ("displacements" + alpha_tag(s, l.alpha) + ".csv"), header(ctx, "solve", extra),
                          {"n", "k", "omega_k", "f_nk"});
            for (std::size_t n = 0; n < v.num_polarons; ++n)
                for (std::size_t k = 0; k < v.num_modes; ++k)
                    csv.row({std::to_string(n + 1), std::to_string(k + 1), fmt(modes[k].omega),
                             fmt(v.displacements[n * v.num_modes + k])});
        }
    }

    if (s.solver.trace) {
        for (const auto& l : ladders)
            for (const auto& r : l.rungs) {
                CsvWriter csv(dir / ("trace" + alpha_tag(s, l.alpha) + "_N" + std::to_string(r.n) + ".csv"),
                              header(ctx, "solve", {kv("alpha", l.alpha), kv("N", r.n)}),
                              {"iteration", "energy", "grad_norm"});
                for (std::size_t i = 0; i < r.trace_iteration.size(); ++i)
                    csv.row({std::to_string(r.trace_iteration[i]), fmt(r.trace_energy[i]), fmt(r.trace_grad[i])});
            }
    }

    json doc{{"config", ctx.config}, {"results", json::array()}};
    for (const auto& l : ladders) {
        json entry{{"alpha", l.alpha}, {"delta_R_SH", l.delta_r}, {"ladder", json::array()}};
        for (const auto& r : l.rungs) {
            json rep = json::parse(r.report);
            rep["coherence"] = r.coherence;
            entry["ladder"].push_back(std::move(rep));
        }
        doc["results"].push_back(std::move(entry));
    }
    write_text(dir / "report.json", doc.dump(2));
}

// ---- wigner ------------------------------------------------------------------

struct WignerSettings {
    std::vector<std::size_t> modes;   // 1-based, empty: use omega targets
    std::vector<double> omega;
    std::vector<polaron_wigner_channel> channels;
    std::vector<std::size_t> n_list;
    std::size_t points = 301;
    std::size_t moment_order = 0;
};

const char* channel_name(polaron_wigner_channel c)
{
    return c == POLARON_WIGNER_DIAGONAL ? "diagonal" : "off_diagonal";
}

WignerSettings wigner_settings(const json& config)
{
    WignerSettings w;
    if (!config.contains("wigner") || !config["wigner"].is_object()) throw Failure(kExitConfig, "config: missing section 'wigner'");
    const json& j = config["wigner"];
    try {
        if (j.contains("modes")) {
            for (const json& m : j["modes"]) {
                const long long k = m.get<long long>();
                if (k < 1) throw Failure(kExitConfig, "config: wigner.modes are 1-based indices");
                w.modes.push_back(static_cast<std::size_t>(k));
            }
        } else {
            w.omega = j.at("omega").get<std::vector<double>>();
        }
        for (const json& c : j.at("channels")) {
            const std::string name = c.get<std::string>();
            if (name == "diagonal" || name == "up_up")
                w.channels.push_back(POLARON_WIGNER_DIAGONAL);
            else if (name == "off_diagonal" || name == "up_down")
                w.channels.push_back(POLARON_WIGNER_OFF_DIAGONAL);
            else
                throw Failure(kExitConfig, "config: unknown wigner channel '" + name + "'");
        }
        w.n_list = j.at("N").get<std::vector<std::size_t>>();
        w.points = j.at("points").get<std::size_t>();
        if (j.contains("moment_order")) w.moment_order = j["moment_order"].get<std::size_t>();
    } catch (const json::exception& e) {
        throw Failure(kExitConfig, std::string("config: wigner: ") + e.what());
    }
    if (w.n_list.empty() || std::find(w.n_list.begin(), w.n_list.end(), 0u) != w.n_list.end())
        throw Failure(kExitConfig, "config: wigner.N must list polaron numbers >= 1");
    if (w.points < 3) throw Failure(kExitConfig, "config: wigner.points must be at least 3");
    if (w.modes.empty() && w.omega.empty()) throw Failure(kExitConfig, "config: wigner needs modes or omega");
    return w;
}

std::vector<std::size_t> select_modes(const WignerSettings& w, const std::vector<ModeInfo>& modes)
{
    std::vector<std::size_t> out; // 0-based
    if (!w.modes.empty()) {
        for (std::size_t k : w.modes) {
            if (k > modes.size())
                throw Failure(kExitConfig, "invalid mode index " + std::to_string(k) + " (bath has " +
                                               std::to_string(modes.size()) + " modes)");
            out.push_back(k - 1);
        }
    } else {
        for (double target : w.omega) {
            if (!(target > 0)) throw Failure(kExitConfig, "config: wigner.omega targets must be positive");
            std::size_t best = 0;
            for (std::size_t k = 1; k < modes.size(); ++k)
                if (std::abs(std::log(modes[k].omega / target)) < std::abs(std::log(modes[best].omega / target)))
                    best = k;
            out.push_back(best);
        }
    }
    std::vector<std::size_t> unique;
    for (std::size_t k : out)
        if (std::find(unique.begin(), unique.end(), k) == unique.end()) unique.push_back(k);
    return unique;
}

void write_wigner(const RunContext& ctx, const std::vector<Ladder>& ladders, const WignerSettings& w)
{
    const Settings& s = ctx.settings;
    const fs::path dir = s.directory;
    for (const auto& l : ladders) {
        const auto modes = bath_modes(l.bath.get());
        const auto selected = select_modes(w, modes);
        for (std::size_t k : selected) {
            // one grid per mode, taken from the largest state, so curves for different N align
            const std::size_t n_top = *std::max_element(w.n_list.begin(), w.n_list.end());
            std::vector<double> x(w.points);
            check(polaron_wigner_default_grid(l.rungs[n_top - 1].state.get(), k, w.points, x.data()), "wigner grid");
            for (polaron_wigner_channel ch : w.channels) {
                for (std::size_t n : w.n_list) {
                    const polaron_state* st = l.rungs[n - 1].state.get();
                    std::vector<double> values(x.size());
                    check(polaron_wigner(st, l.bath.get(), k, ch, x.data(), x.size(), values.data()), "wigner");

                    auto extra = bath_lines(l);
                    extra.push_back(kv("delta", s.delta));
                    extra.push_back(kv("N", n));
                    extra.push_back(kv("k", k + 1));
                    extra.push_back(kv("omega_k", modes[k].omega));
                    extra.push_back(std::string("channel = ") + channel_name(ch));
                    extra.push_back("convention = closed_form (1/pi normalization)");
                    std::vector<std::string> columns{"X", "W"};

                    std::vector<double> moment_values;
                    if (w.moment_order > 0) {
                        const polaron_moment_channel mc =
                            ch == POLARON_WIGNER_DIAGONAL ? POLARON_MOMENT_UP : POLARON_MOMENT_SIGMA_X;
                        std::vector<double> table(w.moment_order * w.moment_order);
                        check(polaron_mode_moments(st, l.bath.get(), k, w.moment_order, mc, table.data()), "moments");
                        moment_values.resize(x.size());
                        double tail = 0.0;
                        check(polaron_wigner_from_moments(mc, table.data(), w.moment_order, x.data(), x.size(),
                                                          moment_values.data(), &tail),
                              "wigner from moments");
                        extra.push_back(kv("moment_order", w.moment_order));
                        extra.push_back(kv("moment_tail", tail));
                        extra.push_back(std::string("W_moments convention = moment_series (2/pi normalization; ") +
                                        (ch == POLARON_WIGNER_DIAGONAL ? "equals 2 W" : "equals -2 W") + ")");
                        columns.push_back("W_moments");
                    }

                    CsvWriter csv(dir / ("wigner" + alpha_tag(s, l.alpha) + "_k" + std::to_string(k + 1) + "_" +
                                         channel_name(ch) + "_N" + std::to_string(n) + ".csv"),
                                  header(ctx, "wigner", extra), columns);
                    for (std::size_t i = 0; i < x.size(); ++i) {
                        std::vector<std::string> cells{fmt(x[i]), fmt(values[i])};
                        if (!moment_values.empty()) cells.push_back(fmt(moment_values[i]));
                        csv.row(cells);
                    }
                }
            }
        }
    }
}

// ---- thermal -----------------------------------------------------------------

struct ThermalSettings {
    std::vector<double> deltas;
    double t_min = 0, t_max = 0;
    std::size_t points = 0;
};

ThermalSettings thermal_settings(const json& config)
{
    ThermalSettings t;
    if (!config.contains("thermal") || !config["thermal"].is_object())
        throw Failure(kExitConfig, "config: missing section 'thermal'");
    const json& j = config["thermal"];
    try {
        t.deltas = j.at("delta_list").get<std::vector<double>>();
        t.t_min = j.at("t_min").get<double>();
        t.t_max = j.at("t_max").get<double>();
        t.points = j.at("points").get<std::size_t>();
    } catch (const json::exception& e) {
        throw Failure(kExitConfig, std::string("config: thermal: ") + e.what());
    }
    if (t.deltas.empty()) throw Failure(kExitConfig, "config: thermal.delta_list is empty");
    if (!(t.t_min > 0) || !(t.t_max > t.t_min) || t.points < 2)
        throw Failure(kExitConfig, "config: thermal needs 0 < t_min < t_max and points >= 2");
    return t;
}

int write_thermal(const RunContext& ctx)
{
    const Settings& s = ctx.settings;
    for (double a : s.bath.alphas)
        if (a != 0.5)
            throw Failure(kExitDomain, "thermal: the exact reference exists only on the Toulouse line alpha = 0.5 (got " +
                                           fmt(a) + ")");
    const ThermalSettings t = thermal_settings(ctx.config);
    const fs::path dir = s.directory;

    std::vector<double> temps(t.points);
    for (std::size_t i = 0; i < t.points; ++i)
        temps[i] = std::exp(std::log(t.t_min) + (std::log(t.t_max) - std::log(t.t_min)) * static_cast<double>(i) /
                                                    static_cast<double>(t.points - 1));

    struct Curve {
        double delta_r = 0;
        std::size_t modes = 0;
        std::vector<double> exact, one;
    };
    std::vector<Curve> curves(t.deltas.size());
    parallel_for(curves.size(), ctx.jobs, [&](std::size_t i) {
        const double delta = t.deltas[i];
        Bath bath = make_bath(s, 0.5, delta);
        check(polaron_bath_num_modes(bath.get(), &curves[i].modes), "bath");
        check(polaron_sh_solve(bath.get(), delta, nullptr, &curves[i].delta_r), "silbey-harris");
        for (double T : temps) {
            double e = 0, o = 0;
            check(polaron_toulouse_coherence(delta, s.bath.omega_c, T, &e), "toulouse");
            check(polaron_onepolaron_thermal(curves[i].delta_r, delta, T, &o), "one-polaron");
            curves[i].exact.push_back(e);
            curves[i].one.push_back(o);
        }
    });

    for (std::size_t i = 0; i < curves.size(); ++i) {
        const std::string name = t.deltas.size() > 1 ? "thermal_delta_" + tag(t.deltas[i]) + ".csv" : "thermal.csv";
        CsvWriter csv(dir / name,
                      header(ctx, "thermal",
                             {kv("alpha", 0.5), kv("delta", t.deltas[i]), kv("omega_c", s.bath.omega_c),
                              kv("lambda", s.bath.lambda), kv("M", curves[i].modes),
                              kv("delta_R_SH", curves[i].delta_r), "T in units of omega_c",
                              "exact = -<sigma_x> on the Toulouse line", "one_polaron = (delta_R/delta) tanh(delta_R/2T)"}),
                      {"T", "exact", "one_polaron"});
        for (std::size_t j = 0; j < temps.size(); ++j)
            csv.row({fmt(temps[j]), fmt(curves[i].exact[j]), fmt(curves[i].one[j])});
    }
    return 0;
}

// ---- ed-check ----------------------------------------------------------------

int write_ed_check(const RunContext& ctx)
{
    const Settings& s = ctx.settings;
    if (s.bath.alphas.size() != 1) throw Failure(kExitConfig, "ed-check: needs a single bath.alpha");
    const double alpha = s.bath.alphas.front();
    if (!ctx.config.contains("ed") || !ctx.config["ed"].is_object())
        throw Failure(kExitConfig, "config: missing section 'ed'");
    const json& j = ctx.config["ed"];

    std::vector<double> omega, g;
    std::size_t cutoff = 0, n_max = 0;
    double lambda = 0;
    try {
        cutoff = j.at("fock_cutoff").get<std::size_t>();
        n_max = j.at("N_max").get<std::size_t>();
        lambda = j.at("lambda").get<double>();
        if (j.contains("modes")) {
            for (const json& m : j["modes"]) {
                omega.push_back(m.at(0).get<double>());
                g.push_back(m.at(1).get<double>());
            }
        } else {
            // Ohmic shells [L^-n-1, L^-n] omega_c, each represented at its upper edge
            const std::size_t m = j.at("num_modes").get<std::size_t>();
            const double wc = s.bath.omega_c;
            for (std::size_t n = 0; n < m; ++n) {
                const double hi = std::pow(lambda, -static_cast<double>(n));
                omega.push_back(wc * hi);
                g.push_back(wc * std::sqrt(alpha * (hi * hi - hi * hi / (lambda * lambda))));
            }
        }
    } catch (const json::exception& e) {
        throw Failure(kExitConfig, std::string("config: ed: ") + e.what());
    }
    if (n_max < 1) throw Failure(kExitConfig, "config: ed.N_max must be at least 1");

    polaron_ed_result* raw = nullptr;
    check(polaron_ed_ground(omega.data(), g.data(), omega.size(), cutoff, s.delta, &raw), "exact diagonalization");
    EdResult ed(raw);
    polaron_ed_summary es{};
    check(polaron_ed_get_summary(ed.get(), &es), "exact diagonalization");
    if (!es.cutoff_converged)
        std::cerr << "warning: ED energy moved by " << fmt(es.cutoff_shift) << " between n_max = " << cutoff
                  << " and " << es.check_cutoff << "\n";

    polaron_bath* b = nullptr;
    check(polaron_bath_from_modes(alpha, s.bath.omega_c, lambda, omega.data(), g.data(), omega.size(), &b), "bath");
    const Ladder ladder = run_ladder(s, Bath(b), alpha, s.delta, n_max);

    const fs::path dir = s.directory;
    std::vector<std::string> extra{kv("alpha", alpha), kv("delta", s.delta), kv("M", omega.size()),
                                   kv("fock_cutoff", cutoff), kv("dimension", es.dimension),
                                   kv("ed_residual", es.residual), kv("check_cutoff", es.check_cutoff),
                                   kv("cutoff_shift", es.cutoff_shift),
                                   std::string("cutoff_converged = ") + (es.cutoff_converged ? "true" : "false")};
    for (std::size_t k = 0; k < omega.size(); ++k)
        extra.push_back("mode " + std::to_string(k + 1) + ": omega = " + fmt(omega[k]) + ", g = " + fmt(g[k]));
    extra.push_back("coherence = <sigma_x>");
    CsvWriter csv(dir / "ed_check.csv", header(ctx, "ed-check", extra),
                  {"N", "E_var", "E_ed", "coherence_var", "coherence_ed"});
    for (const auto& r : ladder.rungs)
        csv.row({std::to_string(r.n), fmt(r.energy), fmt(es.energy), fmt(r.coherence), fmt(es.coherence)});

    json problem{{"modes", json::array()}, {"fock_cutoff", cutoff}, {"delta", s.delta}};
    for (std::size_t k = 0; k < omega.size(); ++k) problem["modes"].push_back({omega[k], g[k]});
    json result{{"energy", es.energy},         {"coherence", es.coherence},         {"residual", es.residual},
                {"dimension", es.dimension},   {"check_cutoff", es.check_cutoff},   {"cutoff_shift", es.cutoff_shift},
                {"matvecs", es.matvecs},       {"cutoff_converged", es.cutoff_converged != 0}};
    write_text(dir / "ed_result.json", json{{"problem", problem}, {"result", result}}.dump(2));
    const bool ok = std::all_of(ladder.rungs.begin(), ladder.rungs.end(), [](const Rung& r) { return r.converged; });
    return ok ? 0 : kExitConvergence;
}

int finish(const std::vector<Ladder>& ladders)
{
    if (all_converged(ladders)) return 0;
    std::cerr << "warning: some optimizations did not reach the gradient tolerance; see flag column\n";
    return kExitConvergence;
}

} // namespace

int cmd_solve(const RunContext& ctx)
{
    const Settings& s = ctx.settings;
    ensure_directory(s.directory);
    std::size_t n_max = s.solver.n_max;
    WignerSettings w;
    if (wants(s, "wigner")) {
        w = wigner_settings(ctx.config);
        n_max = std::max(n_max, *std::max_element(w.n_list.begin(), w.n_list.end()));
    }
    const auto ladders = solve_all(ctx, n_max);
    write_solve_outputs(ctx, ladders);
    if (wants(s, "wigner")) write_wigner(ctx, ladders, w);
    int code = finish(ladders);
    if (wants(s, "ed_check")) code = std::max(code, write_ed_check(ctx));
    if (wants(s, "thermal")) code = std::max(code, write_thermal(ctx));
    return code;
}

int cmd_wigner(const RunContext& ctx)
{
    const Settings& s = ctx.settings;
    const WignerSettings w = wigner_settings(ctx.config);
    ensure_directory(s.directory);
    const std::size_t n_max = *std::max_element(w.n_list.begin(), w.n_list.end());
    const auto ladders = solve_all(ctx, n_max);
    // mode selection is validated before anything is written
    for (const auto& l : ladders) select_modes(w, bath_modes(l.bath.get()));
    write_wigner(ctx, ladders, w);
    return finish(ladders);
}

int cmd_thermal(const RunContext& ctx)
{
    ensure_directory(ctx.settings.directory);
    return write_thermal(ctx);
}

int cmd_ed_check(const RunContext& ctx)
{
    ensure_directory(ctx.settings.directory);
    return write_ed_check(ctx);
}

int cmd_discretize(const RunContext& ctx)
{
    const Settings& s = ctx.settings;
    ensure_directory(s.directory);
    for (double alpha : s.bath.alphas) {
        Bath bath = make_bath(s, alpha, s.delta);
        const auto modes = bath_modes(bath.get());
        const std::string t = s.bath.alphas.size() > 1 ? "_alpha_" + tag(alpha) : "";
        write_text(fs::path(s.directory) / ("bath" + t + ".json"), bath_json(bath.get()));
        double dr = 0.0;
        check(polaron_renormalized_tunneling_estimate(alpha, s.bath.omega_c, s.delta, &dr), "bath");
        CsvWriter csv(fs::path(s.directory) / ("bath" + t + ".csv"),
                      header(ctx, "discretize",
                             {kv("alpha", alpha), kv("omega_c", s.bath.omega_c), kv("lambda", s.bath.lambda),
                              kv("M", modes.size()), kv("delta", s.delta), kv("delta_R_continuum", dr)}),
                      {"k", "omega", "g"});
        for (std::size_t k = 0; k < modes.size(); ++k)
            csv.row({std::to_string(k + 1), fmt(modes[k].omega), fmt(modes[k].g)});
    }
    return 0;
}

} // namespace cli
