// extern "C" surface over the C++ core. Exceptions never cross this boundary.

#include "polaron/polaron.h"

#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "ansatz.hpp"
#include "bath.hpp"
#include "errors.hpp"
#include "observables.hpp"
#include "optimizer.hpp"
#include "oracles.hpp"

struct polaron_bath {
    polaron::DiscretizedBath value;
};

struct polaron_state {
    polaron::VariationalState value;
};

struct polaron_report {
    polaron::SolveReport value;
};

struct polaron_ed_result {
    polaron::EDProblem problem;
    polaron::EDResult value;
};

namespace {

thread_local std::string g_last_error;
thread_local double g_last_estimate = 0.0;

polaron_status fail(polaron_status status, const char* message)
{
    g_last_error = message;
    return status;
}

template <class F>
polaron_status guarded(F&& body)
{
    try {
        body();
        return POLARON_OK;
    } catch (const polaron::DomainError& e) {
        return fail(POLARON_ERROR_DOMAIN, e.what());
    } catch (const polaron::ParameterError& e) {
        return fail(POLARON_ERROR_PARAMETER, e.what());
    } catch (const polaron::DimensionError& e) {
        return fail(POLARON_ERROR_DIMENSION, e.what());
    } catch (const polaron::DegenerateStateError& e) {
        return fail(POLARON_ERROR_DEGENERATE, e.what());
    } catch (const polaron::ConvergenceError& e) {
        g_last_estimate = e.last_estimate();
        return fail(POLARON_ERROR_CONVERGENCE, e.what());
    } catch (const polaron::FormatError& e) {
        return fail(POLARON_ERROR_FORMAT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(POLARON_ERROR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(POLARON_ERROR_INTERNAL, e.what());
    } catch (...) {
        return fail(POLARON_ERROR_INTERNAL, "unknown exception");
    }
}

struct NullArgument {};

template <class... P>
bool any_null(const P*... p)
{
    return ((p == nullptr) || ...);
}

polaron_status null_argument()
{
    return fail(POLARON_ERROR_NULL_ARGUMENT, "required pointer argument is NULL");
}

polaron_status write_string(const std::string& s, char* buffer, size_t capacity, size_t* required)
{
    if (required == nullptr) return null_argument();
    *required = s.size() + 1;
    if (capacity < s.size() + 1) {
        if (capacity == 0) return POLARON_OK;
        return fail(POLARON_ERROR_BUFFER_TOO_SMALL, "buffer too small; see *required");
    }
    if (buffer == nullptr) return null_argument();
    std::memcpy(buffer, s.c_str(), s.size() + 1);
    return POLARON_OK;
}

polaron_status copy_out(std::span<const double> src, double* out, size_t capacity)
{
    if (out == nullptr) return null_argument();
    if (capacity < src.size()) return fail(POLARON_ERROR_BUFFER_TOO_SMALL, "output capacity too small");
    std::copy(src.begin(), src.end(), out);
    return POLARON_OK;
}

polaron::OptimizerConfig to_config(const polaron_optimizer_config* c)
{
    polaron::OptimizerConfig out;
    if (c == nullptr) return out;
    out.grad_tol = c->grad_tol;
    out.max_iters = c->max_iters;
    out.num_restarts = c->num_restarts;
    out.seed = c->seed;
    if (c->crossover_count > 0) {
        if (c->crossover_grid == nullptr) throw polaron::ParameterError("crossover_grid is NULL but count > 0");
        out.crossover_grid.assign(c->crossover_grid, c->crossover_grid + c->crossover_count);
    }
    out.memory = c->memory;
    out.prune_tol = c->prune_tol;
    out.record_trace = c->record_trace != 0;
    return out;
}

polaron::MomentChannel to_channel(polaron_moment_channel c)
{
    switch (c) {
    case POLARON_MOMENT_IDENTITY: return polaron::MomentChannel::identity;
    case POLARON_MOMENT_SIGMA_X: return polaron::MomentChannel::sigma_x;
    case POLARON_MOMENT_SIGMA_Y: return polaron::MomentChannel::sigma_y;
    case POLARON_MOMENT_SIGMA_Z: return polaron::MomentChannel::sigma_z;
    case POLARON_MOMENT_UP: return polaron::MomentChannel::up;
    }
    throw polaron::ParameterError("unknown moment channel");
}

} // namespace

extern "C" {

POLARON_API const char* polaron_version(void)
{
    return "0.1.0";
}

POLARON_API const char* polaron_status_string(polaron_status status)
{
    switch (status) {
    case POLARON_OK: return "ok";
    case POLARON_ERROR_DOMAIN: return "domain error";
    case POLARON_ERROR_PARAMETER: return "parameter error";
    case POLARON_ERROR_DIMENSION: return "dimension error";
    case POLARON_ERROR_DEGENERATE: return "degenerate state";
    case POLARON_ERROR_CONVERGENCE: return "convergence failure";
    case POLARON_ERROR_FORMAT: return "format error";
    case POLARON_ERROR_NULL_ARGUMENT: return "null argument";
    case POLARON_ERROR_BUFFER_TOO_SMALL: return "buffer too small";
    case POLARON_ERROR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

POLARON_API const char* polaron_last_error(void)
{
    return g_last_error.c_str();
}

POLARON_API double polaron_last_error_estimate(void)
{
    return g_last_estimate;
}

// ---- bath ------------------------------------------------------------------

POLARON_API polaron_status polaron_spectral_density(double alpha, double omega_c, double omega, double* out)
{
    if (any_null(out)) return null_argument();
    return guarded([&] { *out = polaron::SpectralDensity(alpha, omega_c)(omega); });
}

POLARON_API polaron_status polaron_renormalized_tunneling_estimate(double alpha, double omega_c, double delta,
                                                                   double* out)
{
    if (any_null(out)) return null_argument();
    return guarded([&] {
        polaron::SpectralDensity sd(alpha, omega_c);
        *out = polaron::renormalized_tunneling_estimate(sd.alpha(), sd.omega_c(), delta);
    });
}

POLARON_API polaron_status polaron_auto_num_modes(double alpha, double omega_c, double lambda, double delta,
                                                  size_t* out)
{
    if (any_null(out)) return null_argument();
    return guarded([&] { *out = polaron::auto_num_modes(polaron::SpectralDensity(alpha, omega_c), lambda, delta); });
}

POLARON_API polaron_status polaron_bath_discretize(double alpha, double omega_c, double lambda, size_t num_modes,
                                                   polaron_bath** out)
{
    if (any_null(out)) return null_argument();
    return guarded([&] {
        *out = new polaron_bath{polaron::discretize(polaron::SpectralDensity(alpha, omega_c), lambda, num_modes)};
    });
}

POLARON_API polaron_status polaron_bath_from_modes(double alpha, double omega_c, double lambda, const double* omega,
                                                   const double* g, size_t num_modes, polaron_bath** out)
{
    if (any_null(omega, g, out)) return null_argument();
    return guarded([&] {
        std::vector<polaron::Mode> modes(num_modes);
        for (size_t k = 0; k < num_modes; ++k) modes[k] = {omega[k], g[k]};
        *out = new polaron_bath{polaron::DiscretizedBath(alpha, omega_c, lambda, std::move(modes))};
    });
}

POLARON_API void polaron_bath_free(polaron_bath* bath)
{
    delete bath;
}

POLARON_API polaron_status polaron_bath_num_modes(const polaron_bath* bath, size_t* out)
{
    if (any_null(bath, out)) return null_argument();
    *out = bath->value.size();
    return POLARON_OK;
}

POLARON_API polaron_status polaron_bath_mode(const polaron_bath* bath, size_t k, double* omega, double* g)
{
    if (any_null(bath, omega, g)) return null_argument();
    if (k >= bath->value.size()) return fail(POLARON_ERROR_DIMENSION, "mode index out of range");
    *omega = bath->value[k].omega;
    *g = bath->value[k].g;
    return POLARON_OK;
}

POLARON_API polaron_status polaron_bath_info(const polaron_bath* bath, double* alpha, double* omega_c,
                                             double* lambda)
{
    if (any_null(bath, alpha, omega_c, lambda)) return null_argument();
    *alpha = bath->value.alpha();
    *omega_c = bath->value.omega_c();
    *lambda = bath->value.lambda();
    return POLARON_OK;
}

POLARON_API polaron_status polaron_bath_to_json(const polaron_bath* bath, char* buffer, size_t capacity,
                                                size_t* required)
{
    if (any_null(bath)) return null_argument();
    std::string s;
    const polaron_status st = guarded([&] { s = bath->value.to_json(); });
    return st != POLARON_OK ? st : write_string(s, buffer, capacity, required);
}

POLARON_API polaron_status polaron_bath_from_json(const char* json, polaron_bath** out)
{
    if (any_null(json, out)) return null_argument();
    return guarded([&] { *out = new polaron_bath{polaron::DiscretizedBath::from_json(json)}; });
}

// ---- state -----------------------------------------------------------------

POLARON_API polaron_status polaron_state_create(size_t num_polarons, size_t num_modes, const double* weights,
                                                const double* displacements, polaron_state** out)
{
    if (any_null(weights, displacements, out)) return null_argument();
    return guarded([&] {
        *out = new polaron_state{polaron::VariationalState(
            std::vector<double>(weights, weights + num_polarons),
            std::vector<double>(displacements, displacements + num_polarons * num_modes), num_modes)};
    });
}

POLARON_API void polaron_state_free(polaron_state* state)
{
    delete state;
}

POLARON_API polaron_status polaron_state_clone(const polaron_state* state, polaron_state** out)
{
    if (any_null(state, out)) return null_argument();
    return guarded([&] { *out = new polaron_state{state->value}; });
}

POLARON_API polaron_status polaron_state_dims(const polaron_state* state, size_t* num_polarons, size_t* num_modes)
{
    if (any_null(state, num_polarons, num_modes)) return null_argument();
    *num_polarons = state->value.num_polarons();
    *num_modes = state->value.num_modes();
    return POLARON_OK;
}

POLARON_API polaron_status polaron_state_weights(const polaron_state* state, double* out, size_t capacity)
{
    if (any_null(state)) return null_argument();
    return copy_out(state->value.weights(), out, capacity);
}

POLARON_API polaron_status polaron_state_displacements(const polaron_state* state, double* out, size_t capacity)
{
    if (any_null(state)) return null_argument();
    return copy_out(state->value.displacements(), out, capacity);
}

POLARON_API polaron_status polaron_state_to_json(const polaron_state* state, char* buffer, size_t capacity,
                                                 size_t* required)
{
    if (any_null(state)) return null_argument();
    std::string s;
    const polaron_status st = guarded([&] { s = state->value.to_json(); });
    return st != POLARON_OK ? st : write_string(s, buffer, capacity, required);
}

POLARON_API polaron_status polaron_state_from_json(const char* json, polaron_state** out)
{
    if (any_null(json, out)) return null_argument();
    return guarded([&] { *out = new polaron_state{polaron::VariationalState::from_json(json)}; });
}

// ---- energy functional -------------------------------------------------------

POLARON_API polaron_status polaron_overlap(const double* f, const double* g, size_t length, double* out)
{
    if (any_null(f, g, out)) return null_argument();
    return guarded([&] { *out = polaron::overlap({f, length}, {g, length}); });
}

POLARON_API polaron_status polaron_energy(const polaron_state* state, const polaron_bath* bath, double delta,
                                          double* out)
{
    if (any_null(state, bath, out)) return null_argument();
    return guarded([&] { *out = polaron::energy(state->value, bath->value, {delta}); });
}

POLARON_API polaron_status polaron_gradient(const polaron_state* state, const polaron_bath* bath, double delta,
                                            double* d_weights, size_t weights_capacity, double* d_displacements,
                                            size_t displacements_capacity, double* energy)
{
    if (any_null(state, bath, d_weights, d_displacements)) return null_argument();
    std::optional<polaron::Gradient> g;
    const polaron_status st = guarded([&] { g = polaron::gradient(state->value, bath->value, {delta}); });
    if (st != POLARON_OK) return st;
    if (weights_capacity < g->weights.size() || displacements_capacity < g->displacements.size())
        return fail(POLARON_ERROR_BUFFER_TOO_SMALL, "gradient output capacity too small");
    std::copy(g->weights.begin(), g->weights.end(), d_weights);
    std::copy(g->displacements.begin(), g->displacements.end(), d_displacements);
    if (energy != nullptr) *energy = g->energy;
    return POLARON_OK;
}

POLARON_API polaron_status polaron_sh_solve(const polaron_bath* bath, double delta, polaron_state** state,
                                            double* delta_r)
{
    if (any_null(bath, delta_r)) return null_argument();
    return guarded([&] {
        const polaron::SilbeyHarris sh = polaron::sh_solve(bath->value, {delta});
        if (state != nullptr) *state = new polaron_state{polaron::VariationalState::single(sh.displacements)};
        *delta_r = sh.delta_r;
    });
}

// ---- optimizer -------------------------------------------------------------

POLARON_API polaron_status polaron_optimizer_config_default(polaron_optimizer_config* out)
{
    if (any_null(out)) return null_argument();
    const polaron::OptimizerConfig d;
    *out = polaron_optimizer_config{d.grad_tol, d.max_iters, d.num_restarts, d.seed, nullptr, 0,
                                    d.memory,   d.prune_tol, d.record_trace ? 1 : 0};
    return POLARON_OK;
}

POLARON_API polaron_status polaron_optimize(const polaron_state* initial, const polaron_bath* bath, double delta,
                                            const polaron_optimizer_config* config, polaron_report** out)
{
    if (any_null(initial, bath, out)) return null_argument();
    return guarded([&] {
        *out = new polaron_report{polaron::optimize(initial->value, bath->value, {delta}, to_config(config))};
    });
}

POLARON_API polaron_status polaron_grow(const polaron_report* report, const polaron_bath* bath, double delta,
                                        const polaron_optimizer_config* config, polaron_report** out)
{
    if (any_null(report, bath, out)) return null_argument();
    return guarded([&] {
        *out = new polaron_report{polaron::grow(report->value, bath->value, {delta}, to_config(config))};
    });
}

POLARON_API void polaron_report_free(polaron_report* report)
{
    delete report;
}

POLARON_API polaron_status polaron_report_get_summary(const polaron_report* report, polaron_report_summary* out)
{
    if (any_null(report, out)) return null_argument();
    const polaron::SolveReport& r = report->value;
    *out = polaron_report_summary{r.energy,     r.grad_norm, r.crossover, r.iterations, r.state.num_polarons(),
                                  r.converged ? 1 : 0};
    return POLARON_OK;
}

POLARON_API polaron_status polaron_report_state(const polaron_report* report, polaron_state** out)
{
    if (any_null(report, out)) return null_argument();
    return guarded([&] { *out = new polaron_state{report->value.state}; });
}

POLARON_API polaron_status polaron_report_history(const polaron_report* report, double* out, size_t capacity,
                                                  size_t* count)
{
    if (any_null(report, count)) return null_argument();
    const auto& h = report->value.energy_history_per_n;
    *count = h.size();
    if (capacity == 0) return POLARON_OK;
    return copy_out(h, out, capacity);
}

POLARON_API polaron_status polaron_report_trace(const polaron_report* report, size_t* iterations, double* energies,
                                                double* grad_norms, size_t capacity, size_t* count)
{
    if (any_null(report, count)) return null_argument();
    const auto& t = report->value.trace;
    *count = t.size();
    if (capacity == 0) return POLARON_OK;
    if (capacity < t.size()) return fail(POLARON_ERROR_BUFFER_TOO_SMALL, "trace capacity too small");
    for (size_t i = 0; i < t.size(); ++i) {
        if (iterations != nullptr) iterations[i] = t[i].iteration;
        if (energies != nullptr) energies[i] = t[i].energy;
        if (grad_norms != nullptr) grad_norms[i] = t[i].grad_norm;
    }
    return POLARON_OK;
}

POLARON_API const char* polaron_report_diagnostics(const polaron_report* report)
{
    return report == nullptr ? "" : report->value.diagnostics.c_str();
}

POLARON_API polaron_status polaron_report_to_json(const polaron_report* report, char* buffer, size_t capacity,
                                                  size_t* required)
{
    if (any_null(report)) return null_argument();
    std::string s;
    const polaron_status st = guarded([&] { s = report->value.to_json(); });
    return st != POLARON_OK ? st : write_string(s, buffer, capacity, required);
}

// ---- observables -------------------------------------------------------------

POLARON_API polaron_status polaron_coherence(const polaron_state* state, double* out)
{
    if (any_null(state, out)) return null_argument();
    return guarded([&] { *out = polaron::coherence(state->value); });
}

POLARON_API polaron_status polaron_coherence_from_energy(const polaron_state* state, const polaron_bath* bath,
                                                         double delta, double* out)
{
    if (any_null(state, bath, out)) return null_argument();
    return guarded([&] { *out = polaron::coherence_from_energy_terms(state->value, bath->value, {delta}); });
}

POLARON_API polaron_status polaron_sigma_z(const polaron_state* state, double* out)
{
    if (any_null(state, out)) return null_argument();
    return guarded([&] { *out = polaron::sigma_z(state->value); });
}

POLARON_API polaron_status polaron_wigner_default_grid(const polaron_state* state, size_t mode, size_t points,
                                                       double* out)
{
    if (any_null(state, out)) return null_argument();
    return guarded([&] {
        const auto grid = polaron::default_wigner_grid(state->value, mode, points);
        std::copy(grid.begin(), grid.end(), out);
    });
}

POLARON_API polaron_status polaron_wigner(const polaron_state* state, const polaron_bath* bath, size_t mode,
                                          polaron_wigner_channel channel, const double* x, size_t points,
                                          double* values)
{
    if (any_null(state, bath, x, values)) return null_argument();
    return guarded([&] {
        const std::span<const double> grid(x, points);
        polaron::WignerCurve c;
        if (channel == POLARON_WIGNER_DIAGONAL)
            c = polaron::wigner_diag(state->value, bath->value, mode, grid);
        else if (channel == POLARON_WIGNER_OFF_DIAGONAL)
            c = polaron::wigner_offdiag(state->value, bath->value, mode, grid);
        else
            throw polaron::ParameterError("unknown Wigner channel");
        std::copy(c.values.begin(), c.values.end(), values);
    });
}

POLARON_API polaron_status polaron_mode_moments(const polaron_state* state, const polaron_bath* bath, size_t mode,
                                                size_t m_max, polaron_moment_channel channel, double* out)
{
    if (any_null(state, bath, out)) return null_argument();
    return guarded([&] {
        const auto t = polaron::mode_moments(state->value, bath->value, mode, m_max, to_channel(channel));
        std::copy(t.entries.begin(), t.entries.end(), out);
    });
}

POLARON_API polaron_status polaron_wigner_from_moments(polaron_moment_channel channel, const double* table,
                                                       size_t m_max, const double* x, size_t points, double* values,
                                                       double* tail)
{
    if (any_null(table, x, values)) return null_argument();
    return guarded([&] {
        polaron::MomentTable t{to_channel(channel), m_max, std::vector<double>(table, table + m_max * m_max)};
        const auto c = polaron::wigner_from_moments(t, {x, points});
        std::copy(c.values.begin(), c.values.end(), values);
        if (tail != nullptr) *tail = c.tail_magnitude;
    });
}

// ---- references -------------------------------------------------------------

POLARON_API polaron_status polaron_ed_ground(const double* omega, const double* g, size_t num_modes, size_t n_max,
                                             double delta, polaron_ed_result** out)
{
    if (any_null(omega, g, out)) return null_argument();
    return guarded([&] {
        polaron::EDProblem p{{}, n_max, delta};
        for (size_t k = 0; k < num_modes; ++k) p.modes.push_back({omega[k], g[k]});
        auto r = std::make_unique<polaron_ed_result>(polaron_ed_result{p, polaron::ed_ground(p)});
        *out = r.release();
    });
}

POLARON_API void polaron_ed_result_free(polaron_ed_result* result)
{
    delete result;
}

POLARON_API polaron_status polaron_ed_get_summary(const polaron_ed_result* result, polaron_ed_summary* out)
{
    if (any_null(result, out)) return null_argument();
    const polaron::EDResult& r = result->value;
    *out = polaron_ed_summary{r.energy,    r.coherence,    r.residual,   r.cutoff_shift,
                              r.dimension, r.check_cutoff, r.iterations, r.cutoff_converged ? 1 : 0};
    return POLARON_OK;
}

POLARON_API polaron_status polaron_ed_moments(const polaron_ed_result* result, size_t mode, size_t m_max,
                                              polaron_moment_channel channel, double* out)
{
    if (any_null(result, out)) return null_argument();
    return guarded([&] {
        const auto t = polaron::ed_moments(result->problem, result->value.ground_state, mode, m_max, to_channel(channel));
        std::copy(t.entries.begin(), t.entries.end(), out);
    });
}

POLARON_API polaron_status polaron_toulouse_coherence(double delta, double omega_c, double temperature, double* out)
{
    if (any_null(out)) return null_argument();
    return guarded([&] { *out = polaron::toulouse_coherence({delta, omega_c, temperature}); });
}

POLARON_API polaron_status polaron_onepolaron_thermal(double delta_r, double delta, double temperature, double* out)
{
    if (any_null(out)) return null_argument();
    return guarded([&] { *out = polaron::onepolaron_thermal(delta_r, delta, temperature); });
}

} // extern "C"
