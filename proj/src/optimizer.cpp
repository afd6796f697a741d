#include "optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

#include <json.hpp>

#include "errors.hpp"

namespace polaron {

namespace {

constexpr double kArmijo = 1e-4;
constexpr std::size_t kMaxBacktracks = 60;
constexpr std::size_t kStallWindow = 500;
constexpr double kSeedWeight = 0.05;
constexpr double kSeedJitter = 1e-3;

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double max_abs(const std::vector<double>& a)
{
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

// Parameter vector layout: [C_1..C_N, f^(1)_1..f^(1)_M, ..., f^(N)_M].
std::vector<double> pack(const VariationalState& s)
{
    std::vector<double> x(s.weights().begin(), s.weights().end());
    x.insert(x.end(), s.displacements().begin(), s.displacements().end());
    return x;
}

VariationalState unpack(const std::vector<double>& x, std::size_t n, std::size_t m)
{
    return VariationalState(std::vector<double>(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n)),
                            std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(n), x.end()), m);
}

struct Evaluation {
    double energy;
    std::vector<double> grad;
};

Evaluation evaluate(const std::vector<double>& x, std::size_t n, const DiscretizedBath& bath,
                    const ModelParams& params)
{
    const VariationalState s = unpack(x, n, bath.size());
    Gradient g = gradient(s, bath, params);
    std::vector<double> flat = std::move(g.weights);
    flat.insert(flat.end(), g.displacements.begin(), g.displacements.end());
    return {g.energy, std::move(flat)};
}

struct LbfgsOutcome {
    std::vector<double> x;
    std::size_t iterations = 0;
    bool converged = false;
    std::string diagnostics;
};

// One L-BFGS run with backtracking line search. Sufficient decrease is the
// Armijo test; near the rounding floor of E the approximate-Wolfe test
// (E may rise by 1e-14 |E| while the slope stays controlled) is accepted too.
LbfgsOutcome lbfgs(std::vector<double> x, std::size_t n, const DiscretizedBath& bath, const ModelParams& params,
                   const OptimizerConfig& config, std::size_t iteration_budget, std::size_t iteration_offset,
                   std::vector<TracePoint>* trace)
{
    LbfgsOutcome out;
    Evaluation cur = evaluate(x, n, bath, params);
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    std::vector<double> energies;
    const std::size_t dim = x.size();

    std::size_t it = 0;
    for (;; ++it) {
        const double gnorm = max_abs(cur.grad);
        if (trace) trace->push_back({iteration_offset + it, cur.energy, gnorm});
        if (gnorm <= config.grad_tol) {
            out.converged = true;
            break;
        }
        if (it >= iteration_budget) {
            out.diagnostics = "iteration cap reached (grad " + std::to_string(gnorm) + ")";
            break;
        }
        energies.push_back(cur.energy);
        if (energies.size() > kStallWindow) {
            const double old = energies[energies.size() - 1 - kStallWindow];
            if (old - cur.energy <= 1e-15 * std::abs(cur.energy)) {
                out.diagnostics = "stalled: no energy decrease over " + std::to_string(kStallWindow) +
                                  " iterations (grad " + std::to_string(gnorm) + ")";
                break;
            }
        }

        // Two-loop recursion.
        std::vector<double> d = cur.grad;
        const std::size_t mem = s_hist.size();
        std::vector<double> a(mem);
        for (std::size_t i = mem; i-- > 0;) {
            a[i] = rho_hist[i] * dot(s_hist[i], d);
            for (std::size_t j = 0; j < dim; ++j) d[j] -= a[i] * y_hist[i][j];
        }
        if (mem > 0) {
            const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
            for (double& v : d) v *= gamma;
        }
        for (std::size_t i = 0; i < mem; ++i) {
            const double b = rho_hist[i] * dot(y_hist[i], d);
            for (std::size_t j = 0; j < dim; ++j) d[j] += (a[i] - b) * s_hist[i][j];
        }
        for (double& v : d) v = -v;

        double slope = dot(cur.grad, d);
        if (!(slope < 0.0)) {
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            d = cur.grad;
            for (double& v : d) v = -v;
            slope = dot(cur.grad, d);
        }

        double step = s_hist.empty() ? std::min(1.0, 0.1 / max_abs(d)) : 1.0;
        bool accepted = false;
        std::vector<double> trial(dim);
        Evaluation next;
        for (std::size_t bt = 0; bt < kMaxBacktracks; ++bt) {
            for (std::size_t j = 0; j < dim; ++j) trial[j] = x[j] + step * d[j];
            bool ok = true;
            try {
                next = evaluate(trial, n, bath, params);
            } catch (const DegenerateStateError&) {
                ok = false;
            }
            if (ok && std::isfinite(next.energy)) {
                const double armijo = cur.energy + kArmijo * step * slope;
                const bool sufficient = next.energy <= armijo;
                const bool approx_wolfe = next.energy <= cur.energy + 1e-14 * std::abs(cur.energy) &&
                                          dot(next.grad, d) <= -0.8 * slope && dot(next.grad, d) >= 0.9 * slope;
                if (sufficient || approx_wolfe) {
                    accepted = true;
                    break;
                }
                // Safeguarded quadratic interpolation of E along d.
                const double curvature = next.energy - cur.energy - step * slope;
                double t = curvature > 0.0 ? -slope * step * step / (2.0 * curvature) : 0.5 * step;
                step = std::clamp(t, 0.1 * step, 0.5 * step);
            } else {
                step *= 0.1;
            }
        }

        if (!accepted) {
            if (!s_hist.empty()) {
                s_hist.clear();
                y_hist.clear();
                rho_hist.clear();
                continue;
            }
            out.diagnostics = "line search failed with nonzero gradient (grad " + std::to_string(gnorm) + ")";
            break;
        }

        std::vector<double> s(dim), y(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            s[j] = trial[j] - x[j];
            y[j] = next.grad[j] - cur.grad[j];
        }
        const double sy = dot(s, y);
        if (sy > 1e-14 * std::sqrt(dot(s, s) * dot(y, y))) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (s_hist.size() > config.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        x = std::move(trial);
        cur = std::move(next);
    }
    out.x = std::move(x);
    out.iterations = it;
    return out;
}

// Largest pair-sum contribution of row n, relative to <Psi|Psi>.
double row_contribution(const VariationalState& s, std::size_t n)
{
    double norm = 0.0;
    for (std::size_t a = 0; a < s.num_polarons(); ++a)
        for (std::size_t b = 0; b < s.num_polarons(); ++b)
            norm += 2.0 * s.weight(a) * s.weight(b) * overlap(s.row(a), s.row(b));
    double sum = 0.0;
    for (std::size_t m = 0; m < s.num_polarons(); ++m) {
        const double k = std::max(overlap(s.row(n), s.row(m)), plus_kernel(s.row(n), s.row(m)));
        sum += std::abs(s.weight(m)) * k;
    }
    return 2.0 * std::abs(s.weight(n)) * sum / norm;
}

void finalize(SolveReport& r, const DiscretizedBath& bath, const ModelParams& params, const OptimizerConfig& config)
{
    r.state.normalize();
    const Gradient g = gradient(r.state, bath, params);
    r.energy = energy(r.state, bath, params);
    r.grad_norm = g.max_abs();
    r.converged = r.grad_norm <= config.grad_tol;
}

} // namespace

void validate(const OptimizerConfig& config)
{
    if (!(config.grad_tol > 0.0)) throw ParameterError("optimizer: grad_tol must be positive");
    if (config.max_iters < 1) throw ParameterError("optimizer: max_iters must be at least 1");
    if (config.num_restarts < 1) throw ParameterError("optimizer: num_restarts must be at least 1");
    if (config.memory < 1) throw ParameterError("optimizer: memory must be at least 1");
    for (double w : config.crossover_grid)
        if (!(w > 0.0)) throw ParameterError("optimizer: crossover frequencies must be positive");
}

std::string SolveReport::to_json() const
{
    nlohmann::json j;
    j["state"] = nlohmann::json::parse(state.to_json());
    j["energy"] = energy;
    j["grad_norm"] = grad_norm;
    j["iterations"] = iterations;
    j["converged"] = converged;
    j["energy_history_per_N"] = energy_history_per_n;
    j["crossover"] = crossover;
    j["diagnostics"] = diagnostics;
    return j.dump();
}

std::vector<double> crossover_grid(double delta_r, double delta, std::size_t points)
{
    if (points == 0) return {};
    double lo = std::min(delta_r, delta);
    double hi = std::max(delta_r, delta);
    if (!(lo > 0.0)) lo = hi * 1e-6;
    if (points == 1) return {std::sqrt(lo * hi)};
    std::vector<double> grid(points);
    const double step = std::log(hi / lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
    return grid;
}

std::size_t prune(VariationalState& state, double tol)
{
    std::size_t removed = 0;
    bool again = true;
    while (again && state.num_polarons() > 1) {
        again = false;
        for (std::size_t n = 0; n < state.num_polarons(); ++n) {
            if (row_contribution(state, n) < tol) {
                state.erase(n);
                ++removed;
                again = true;
                break;
            }
        }
    }
    return removed;
}

SolveReport optimize(const VariationalState& initial, const DiscretizedBath& bath, const ModelParams& params,
                     const OptimizerConfig& config)
{
    validate(config);
    validate(params);
    if (initial.num_modes() != bath.size()) throw DimensionError("optimize: state and bath disagree on M");

    VariationalState start = initial;
    start.normalize();
    const double initial_energy = energy(start, bath, params);

    SolveReport report{.state = start, .energy_history_per_n = {}, .diagnostics = {}, .trace = {}};
    std::vector<double> x = pack(start);
    std::size_t n = start.num_polarons();
    std::size_t used = 0;
    std::string diagnostics;

    // Renormalizing C between rounds keeps dE/dC on the scale grad_tol was set for.
    for (int round = 0; round < 3 && used < config.max_iters; ++round) {
        LbfgsOutcome o = lbfgs(std::move(x), n, bath, params, config, config.max_iters - used, used,
                               config.record_trace ? &report.trace : nullptr);
        used += o.iterations;
        diagnostics = o.diagnostics;
        report.state = unpack(o.x, n, bath.size());
        if (prune(report.state, config.prune_tol) > 0) n = report.state.num_polarons();
        finalize(report, bath, params, config);
        if (report.converged || !o.converged) break;
        x = pack(report.state);
    }

    report.iterations = used;
    report.diagnostics = report.converged ? std::string() : diagnostics;
    if (report.energy > initial_energy) {
        report.state = start;
        finalize(report, bath, params, config);
        report.diagnostics += (report.diagnostics.empty() ? "" : "; ") + std::string("no decrease, kept initial");
    }
    report.energy_history_per_n.assign(1, report.energy);
    return report;
}

namespace {

// Number of modes seeded with a positive sign for crossover wx.
std::size_t positive_count(const DiscretizedBath& bath, double wx)
{
    std::size_t c = 0;
    while (c < bath.size() && bath[c].omega >= wx) ++c;
    return c;
}

// Drops crossovers that seed the same sign pattern. On sparse baths the log
// grid can collapse to one pattern; it is then topped up with crossovers
// between adjacent modes, nearest the grid centre first.
std::vector<double> distinct_seeds(const std::vector<double>& grid, const DiscretizedBath& bath, std::size_t want)
{
    std::vector<double> out;
    std::vector<std::size_t> seen;
    auto take = [&](double wx) {
        const std::size_t c = positive_count(bath, wx);
        if (std::find(seen.begin(), seen.end(), c) != seen.end()) return;
        seen.push_back(c);
        out.push_back(wx);
    };
    for (double wx : grid) take(wx);
    if (out.size() >= want || grid.empty()) return out;

    const double centre = std::sqrt(grid.front() * grid.back());
    std::vector<double> edges; // edges[c] seeds exactly c positive modes
    edges.push_back(2.0 * bath[0].omega);
    for (std::size_t c = 1; c < bath.size(); ++c) edges.push_back(std::sqrt(bath[c - 1].omega * bath[c].omega));
    edges.push_back(0.5 * bath[bath.size() - 1].omega);
    std::stable_sort(edges.begin(), edges.end(), [&](double a, double b) {
        return std::abs(std::log(a / centre)) < std::abs(std::log(b / centre));
    });
    for (double wx : edges) {
        if (out.size() >= want) break;
        take(wx);
    }
    return out;
}

} // namespace

SolveReport grow(const SolveReport& report, const DiscretizedBath& bath, const ModelParams& params,
                 const OptimizerConfig& config)
{
    validate(config);
    VariationalState base = report.state;
    base.normalize();
    const auto main_row = base.row(0);
    const double delta_r = params.delta * plus_kernel(main_row, main_row);
    std::vector<double> grid = config.crossover_grid;
    if (grid.empty())
        grid = distinct_seeds(params.delta > 0.0 ? crossover_grid(delta_r, params.delta, config.num_restarts)
                                                 : crossover_grid(bath[bath.size() - 1].omega, bath[0].omega,
                                                                  config.num_restarts),
                              bath, config.num_restarts);

    std::mt19937_64 rng(config.seed + 7919 * base.num_polarons());
    std::normal_distribution<double> noise(0.0, 1.0);

    std::optional<SolveReport> best;
    std::size_t total_iterations = 0;
    for (double wx : grid) {
        std::vector<double> seed(bath.size());
        for (std::size_t k = 0; k < bath.size(); ++k) {
            const double sign = bath[k].omega >= wx ? 1.0 : -1.0;
            seed[k] = sign * main_row[k] * (1.0 + kSeedJitter * noise(rng));
        }
        VariationalState candidate = base;
        candidate.append(kSeedWeight * base.weight(0), seed);
        std::optional<SolveReport> r;
        try {
            r = optimize(candidate, bath, params, config);
        } catch (const DegenerateStateError&) {
            continue;
        }
        total_iterations += r->iterations;
        r->crossover = wx;
        if (!best || r->energy < best->energy) best = std::move(r);
    }

    if (!best || !(best->energy <= report.energy)) {
        SolveReport kept = report;
        std::vector<double> zero_row(main_row.begin(), main_row.end());
        kept.state = base;
        kept.state.append(0.0, zero_row);
        kept.energy_history_per_n.push_back(report.energy);
        kept.iterations = total_iterations;
        kept.crossover = 0.0;
        kept.diagnostics = "grow: no candidate lowered the energy, kept N-1 solution";
        return kept;
    }
    best->iterations = total_iterations;
    best->energy_history_per_n = report.energy_history_per_n;
    best->energy_history_per_n.push_back(best->energy);
    return *best;
}

std::vector<SolveReport> solve_ladder(const DiscretizedBath& bath, const ModelParams& params,
                                      const OptimizerConfig& config, std::size_t max_polarons)
{
    if (max_polarons < 1) throw ParameterError("solve_ladder: need at least one polaron");
    const SilbeyHarris sh = sh_solve(bath, params);
    std::vector<SolveReport> ladder;
    ladder.push_back(optimize(VariationalState::single(sh.displacements), bath, params, config));
    while (ladder.size() < max_polarons) ladder.push_back(grow(ladder.back(), bath, params, config));
    return ladder;
}

} // namespace polaron
