#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bath.hpp"
#include "observables.hpp"

namespace polaron {

// ---------------------------------------------------------------------------
// Exact diagonalization of few-mode instances

struct EDProblem {
    std::vector<Mode> modes;  // M <= 4
    std::size_t fock_cutoff;  // per-mode occupation cap n_max >= 8
    double delta;
};

inline constexpr std::size_t kMaxEdDimension = 2'000'000;

void validate(const EDProblem& problem);
std::size_t ed_dimension(std::size_t num_modes, std::size_t fock_cutoff);

struct EDResult {
    double energy = 0.0;
    double coherence = 0.0;    // <sigma_x>
    double residual = 0.0;     // ||H psi - E psi||
    std::size_t iterations = 0; // Lanczos matrix-vector products
    std::size_t dimension = 0;
    // Energy shift between n_max and the comparison cutoff (n_max + 4, or
    // n_max - 4 when the larger basis would exceed the dimension bound).
    std::size_t check_cutoff = 0;
    double cutoff_shift = 0.0;
    bool cutoff_converged = false; // |cutoff_shift| < 1e-8
    std::vector<double> ground_state; // index = spin * (n_max+1)^M + sum_k n_k (n_max+1)^{M-1-k}, spin 0 = up
};

// Lowest eigenpair by restarted Lanczos with full reorthogonalization.
EDResult ed_ground(const EDProblem& problem);

// Same normalization and channel conventions as mode_moments on a variational state.
MomentTable ed_moments(const EDProblem& problem, const std::vector<double>& ground_state, std::size_t mode,
                       std::size_t m_max, MomentChannel channel);

// ---------------------------------------------------------------------------
// Toulouse line (alpha = 1/2)

struct ToulouseParams {
    double delta;
    double omega_c;
    double temperature;

    double kondo_scale() const { return delta * delta / omega_c; }   // T_K
    double bandwidth() const;                                        // D = 4 omega_c / pi
};

// Magnitude -<sigma_x> of the exact resonant-level coherence at temperature T.
// T = 0 uses the closed form (Delta/omega_c)[ln(1 + D^2/T_K^2)/2 + T_K^2/(D^2 + T_K^2) - 1].
double toulouse_coherence(const ToulouseParams& p);
double toulouse_coherence_zero_temperature(double delta, double omega_c);

// (Delta_R/Delta) tanh(Delta_R / 2T); T = 0 gives Delta_R/Delta.
double onepolaron_thermal(double delta_r, double delta, double temperature);

} // namespace polaron
