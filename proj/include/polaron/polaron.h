/*
 * polaron: ground states of the Ohmic spin-boson model from a multi-coherent-
 * state (polaron / antipolaron) variational expansion, plus the exact
 * references used to check it.
 *
 * Conventions shared by every entry point:
 *   - Energies and frequencies are in units of the bath cutoff omega_c.
 *   - Every function returns a polaron_status. On failure the out-parameters
 *     are left untouched and polaron_last_error() describes the problem.
 *   - Handles are opaque. Objects returned through an out-pointer are owned by
 *     the caller and released with the matching *_free function. Handles are
 *     immutable after construction and may be shared read-only across threads.
 *   - Matrices are row-major. A displacement matrix is N x M (polaron, mode);
 *     a moment table is m_max x m_max (m, m').
 *   - Serialization functions follow the snprintf idiom: *required receives
 *     the byte count including the terminating NUL, and the buffer is only
 *     written when capacity >= *required. buffer may be NULL when capacity is 0.
 */
#ifndef POLARON_POLARON_H
#define POLARON_POLARON_H

#include <stddef.h>
#include <stdint.h>

#if defined(POLARON_BUILDING_LIBRARY)
#define POLARON_API __attribute__((visibility("default")))
#else
#define POLARON_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum polaron_status {
    POLARON_OK = 0,
    POLARON_ERROR_DOMAIN = 1,          /* argument outside the mathematical domain */
    POLARON_ERROR_PARAMETER = 2,       /* invalid construction parameter */
    POLARON_ERROR_DIMENSION = 3,       /* shape mismatch or index out of range */
    POLARON_ERROR_DEGENERATE = 4,      /* <Psi|Psi> below 1e-12 */
    POLARON_ERROR_CONVERGENCE = 5,     /* see polaron_last_error_estimate() */
    POLARON_ERROR_FORMAT = 6,          /* malformed JSON document */
    POLARON_ERROR_NULL_ARGUMENT = 7,
    POLARON_ERROR_BUFFER_TOO_SMALL = 8,
    POLARON_ERROR_INTERNAL = 9
} polaron_status;

POLARON_API const char* polaron_version(void);
POLARON_API const char* polaron_status_string(polaron_status status);
/* Message of the most recent failure on the calling thread ("" if none). */
POLARON_API const char* polaron_last_error(void);
/* Last iterate carried by the most recent POLARON_ERROR_CONVERGENCE on this thread. */
POLARON_API double polaron_last_error_estimate(void);

typedef struct polaron_bath polaron_bath;
typedef struct polaron_state polaron_state;
typedef struct polaron_report polaron_report;
typedef struct polaron_ed_result polaron_ed_result;

/* ---- bath --------------------------------------------------------------- */

/* J(omega) = 2 alpha omega for omega <= omega_c, 0 above. */
POLARON_API polaron_status polaron_spectral_density(double alpha, double omega_c, double omega, double* out);

/* Delta (Delta e / omega_c)^{alpha/(1-alpha)}. */
POLARON_API polaron_status polaron_renormalized_tunneling_estimate(double alpha, double omega_c, double delta,
                                                                   double* out);

/* Smallest M with omega_c lambda^{-M} <= 0.01 * the estimate above. */
POLARON_API polaron_status polaron_auto_num_modes(double alpha, double omega_c, double lambda, double delta,
                                                  size_t* out);

/* Logarithmic shells [omega_c lambda^{-n-1}, omega_c lambda^{-n}], one mode each. */
POLARON_API polaron_status polaron_bath_discretize(double alpha, double omega_c, double lambda, size_t num_modes,
                                                   polaron_bath** out);

/* Explicit modes, strictly decreasing in omega. alpha/omega_c/lambda are metadata. */
POLARON_API polaron_status polaron_bath_from_modes(double alpha, double omega_c, double lambda, const double* omega,
                                                   const double* g, size_t num_modes, polaron_bath** out);

POLARON_API void polaron_bath_free(polaron_bath* bath);
POLARON_API polaron_status polaron_bath_num_modes(const polaron_bath* bath, size_t* out);
POLARON_API polaron_status polaron_bath_mode(const polaron_bath* bath, size_t k, double* omega, double* g);
POLARON_API polaron_status polaron_bath_info(const polaron_bath* bath, double* alpha, double* omega_c,
                                             double* lambda);

/* {"alpha":..,"omega_c":..,"lambda":..,"modes":[{"omega":..,"g":..},..]} */
POLARON_API polaron_status polaron_bath_to_json(const polaron_bath* bath, char* buffer, size_t capacity,
                                                size_t* required);
POLARON_API polaron_status polaron_bath_from_json(const char* json, polaron_bath** out);

/* ---- variational state -------------------------------------------------- */

POLARON_API polaron_status polaron_state_create(size_t num_polarons, size_t num_modes, const double* weights,
                                                const double* displacements, polaron_state** out);
POLARON_API void polaron_state_free(polaron_state* state);
POLARON_API polaron_status polaron_state_clone(const polaron_state* state, polaron_state** out);
POLARON_API polaron_status polaron_state_dims(const polaron_state* state, size_t* num_polarons, size_t* num_modes);
/* Copy C_n (capacity >= N) and f^(n)_k (capacity >= N*M). */
POLARON_API polaron_status polaron_state_weights(const polaron_state* state, double* out, size_t capacity);
POLARON_API polaron_status polaron_state_displacements(const polaron_state* state, double* out, size_t capacity);

/* {"C":[..],"f":[[..],..]} */
POLARON_API polaron_status polaron_state_to_json(const polaron_state* state, char* buffer, size_t capacity,
                                                 size_t* required);
POLARON_API polaron_status polaron_state_from_json(const char* json, polaron_state** out);

/* ---- energy functional -------------------------------------------------- */

/* exp(-1/2 sum_k (f_k - g_k)^2) */
POLARON_API polaron_status polaron_overlap(const double* f, const double* g, size_t length, double* out);

POLARON_API polaron_status polaron_energy(const polaron_state* state, const polaron_bath* bath, double delta,
                                          double* out);

/* dE/dC_n into d_weights (capacity >= N), dE/df^(n)_k into d_displacements
 * (capacity >= N*M). energy may be NULL. */
POLARON_API polaron_status polaron_gradient(const polaron_state* state, const polaron_bath* bath, double delta,
                                            double* d_weights, size_t weights_capacity, double* d_displacements,
                                            size_t displacements_capacity, double* energy);

/* Silbey-Harris fixed point. state may be NULL if only Delta_R is wanted. */
POLARON_API polaron_status polaron_sh_solve(const polaron_bath* bath, double delta, polaron_state** state,
                                            double* delta_r);

/* ---- optimizer ---------------------------------------------------------- */

typedef struct polaron_optimizer_config {
    double grad_tol;              /* max-norm gradient tolerance, default 1e-9 */
    size_t max_iters;             /* default 50000 */
    size_t num_restarts;          /* crossover seeds per growth step, default 4 */
    uint64_t seed;                /* seeds the growth jitter, default 1 */
    const double* crossover_grid; /* optional explicit crossover candidates */
    size_t crossover_count;       /* 0: log grid over [Delta_R, Delta] */
    size_t memory;                /* L-BFGS pairs, default 20 */
    double prune_tol;             /* default 1e-10 */
    int record_trace;             /* nonzero: keep (iteration, energy, grad) per step */
} polaron_optimizer_config;

POLARON_API polaron_status polaron_optimizer_config_default(polaron_optimizer_config* out);

POLARON_API polaron_status polaron_optimize(const polaron_state* initial, const polaron_bath* bath, double delta,
                                            const polaron_optimizer_config* config, polaron_report** out);

/* N -> N+1 from a previous report. */
POLARON_API polaron_status polaron_grow(const polaron_report* report, const polaron_bath* bath, double delta,
                                        const polaron_optimizer_config* config, polaron_report** out);

POLARON_API void polaron_report_free(polaron_report* report);

typedef struct polaron_report_summary {
    double energy;
    double grad_norm;
    double crossover; /* seed crossover of the last grown row, 0 if none */
    size_t iterations;
    size_t num_polarons;
    int converged;
} polaron_report_summary;

POLARON_API polaron_status polaron_report_get_summary(const polaron_report* report, polaron_report_summary* out);
POLARON_API polaron_status polaron_report_state(const polaron_report* report, polaron_state** out);
/* Minimum energy for N = 1, 2, ...; *count receives the full length. */
POLARON_API polaron_status polaron_report_history(const polaron_report* report, double* out, size_t capacity,
                                                  size_t* count);
/* Per-iteration trace (empty unless record_trace was set). Any array may be NULL. */
POLARON_API polaron_status polaron_report_trace(const polaron_report* report, size_t* iterations, double* energies,
                                                double* grad_norms, size_t capacity, size_t* count);
/* Empty when converged. Valid for the lifetime of the report. */
POLARON_API const char* polaron_report_diagnostics(const polaron_report* report);
POLARON_API polaron_status polaron_report_to_json(const polaron_report* report, char* buffer, size_t capacity,
                                                  size_t* required);

/* ---- observables -------------------------------------------------------- */

/* <sigma_x>; negative for ground states. */
POLARON_API polaron_status polaron_coherence(const polaron_state* state, double* out);
/* <sigma_x> from the tunneling term of <Psi|H|Psi>; agrees with polaron_coherence. */
POLARON_API polaron_status polaron_coherence_from_energy(const polaron_state* state, const polaron_bath* bath,
                                                         double delta, double* out);
POLARON_API polaron_status polaron_sigma_z(const polaron_state* state, double* out);

typedef enum polaron_wigner_channel {
    POLARON_WIGNER_DIAGONAL = 0,    /* up-projected */
    POLARON_WIGNER_OFF_DIAGONAL = 1 /* sigma_x inserted */
} polaron_wigner_channel;

typedef enum polaron_moment_channel {
    POLARON_MOMENT_IDENTITY = 0,
    POLARON_MOMENT_SIGMA_X = 1,
    POLARON_MOMENT_SIGMA_Y = 2, /* entries hold the imaginary part */
    POLARON_MOMENT_SIGMA_Z = 3,
    POLARON_MOMENT_UP = 4       /* (1 + sigma_z)/2 */
} polaron_moment_channel;

/* Symmetric uniform grid over [-(1.5 max_n|f^(n)_k| + 1), +(...)]. */
POLARON_API polaron_status polaron_wigner_default_grid(const polaron_state* state, size_t mode, size_t points,
                                                       double* out);

/* Closed-form Wigner slice W(X) at zero momentum, normalized with
 * 1/(pi <Psi|Psi>). Relative to the moment-series normalization the diagonal
 * channel is smaller by 2 and the off-diagonal channel by -2. */
POLARON_API polaron_status polaron_wigner(const polaron_state* state, const polaron_bath* bath, size_t mode,
                                          polaron_wigner_channel channel, const double* x, size_t points,
                                          double* values);

POLARON_API polaron_status polaron_mode_moments(const polaron_state* state, const polaron_bath* bath, size_t mode,
                                                size_t m_max, polaron_moment_channel channel, double* out);

/* Wigner slice from a moment table (2/pi normalization). tail may be NULL;
 * it receives the largest contribution of the highest retained order. */
POLARON_API polaron_status polaron_wigner_from_moments(polaron_moment_channel channel, const double* table,
                                                       size_t m_max, const double* x, size_t points, double* values,
                                                       double* tail);

/* ---- references --------------------------------------------------------- */

/* Lowest eigenpair of the truncated-Fock Hamiltonian, M <= 4, n_max >= 8,
 * 2 (n_max+1)^M <= 2e6. delta may be 0. */
POLARON_API polaron_status polaron_ed_ground(const double* omega, const double* g, size_t num_modes, size_t n_max,
                                             double delta, polaron_ed_result** out);
POLARON_API void polaron_ed_result_free(polaron_ed_result* result);

typedef struct polaron_ed_summary {
    double energy;
    double coherence;    /* <sigma_x> */
    double residual;
    double cutoff_shift; /* E(check_cutoff) - E(n_max) */
    size_t dimension;
    size_t check_cutoff;
    size_t matvecs;
    int cutoff_converged;
} polaron_ed_summary;

POLARON_API polaron_status polaron_ed_get_summary(const polaron_ed_result* result, polaron_ed_summary* out);
POLARON_API polaron_status polaron_ed_moments(const polaron_ed_result* result, size_t mode, size_t m_max,
                                              polaron_moment_channel channel, double* out);

/* -<sigma_x> on the Toulouse line (alpha = 1/2); temperature 0 uses the closed form. */
POLARON_API polaron_status polaron_toulouse_coherence(double delta, double omega_c, double temperature, double* out);

/* (Delta_R/Delta) tanh(Delta_R / 2T) */
POLARON_API polaron_status polaron_onepolaron_thermal(double delta_r, double delta, double temperature, double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* POLARON_POLARON_H */
