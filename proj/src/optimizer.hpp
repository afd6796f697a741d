#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ansatz.hpp"
#include "bath.hpp"

namespace polaron {

struct OptimizerConfig {
    double grad_tol = 1e-9;           // max-norm of dE/d(C, f)
    std::size_t max_iters = 50000;
    std::size_t num_restarts = 4;     // crossover seeds per growth step
    std::uint64_t seed = 1;
    std::vector<double> crossover_grid; // empty: log grid over [Delta_R, Delta]
    std::size_t memory = 20;          // L-BFGS curvature pairs
    double prune_tol = 1e-10;
    bool record_trace = false;
};

void validate(const OptimizerConfig& config);

struct TracePoint {
    std::size_t iteration;
    double energy;
    double grad_norm;
};

struct SolveReport {
    VariationalState state;
    double energy = 0.0;
    double grad_norm = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> energy_history_per_n; // entry N-1 is the minimum at N polarons
    double crossover = 0.0;                   // seed crossover of the last grown row, 0 if none
    std::string diagnostics;
    std::vector<TracePoint> trace;

    std::string to_json() const;
};

// Log-spaced crossover candidates over [delta_r, delta].
std::vector<double> crossover_grid(double delta_r, double delta, std::size_t points);

// Quasi-Newton minimization of the Rayleigh quotient over all C_n and f^(n)_k.
// The returned state is normalized, C_1 > 0, with negligible rows pruned.
SolveReport optimize(const VariationalState& initial, const DiscretizedBath& bath, const ModelParams& params,
                     const OptimizerConfig& config);

// N -> N+1: seed the new row as f^(1)_k sign(w_k - w_x) with C = 0.05 C_1 for
// every candidate crossover w_x, re-optimize jointly and keep the best.
SolveReport grow(const SolveReport& report, const DiscretizedBath& bath, const ModelParams& params,
                 const OptimizerConfig& config);

// N = 1 from the Silbey-Harris state, then grow up to max_polarons. One report per N.
std::vector<SolveReport> solve_ladder(const DiscretizedBath& bath, const ModelParams& params,
                                      const OptimizerConfig& config, std::size_t max_polarons);

// Removes rows whose weight in every pair sum is below tol relative to the norm.
std::size_t prune(VariationalState& state, double tol);

} // namespace polaron
