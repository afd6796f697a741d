#pragma once

// Thin RAII layer over the C API. Nothing here sees the C++ core.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "polaron/polaron.h"

namespace cli {

// Carries the process exit code alongside the message.
class Failure : public std::runtime_error {
public:
    Failure(int exit_code, const std::string& what) : std::runtime_error(what), code_(exit_code) {}
    int exit_code() const { return code_; }

private:
    int code_;
};

inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitConvergence = 4;

inline int exit_code_for(polaron_status s)
{
    switch (s) {
    case POLARON_OK: return 0;
    case POLARON_ERROR_DOMAIN: return kExitDomain;
    case POLARON_ERROR_CONVERGENCE:
    case POLARON_ERROR_DEGENERATE: return kExitConvergence;
    case POLARON_ERROR_INTERNAL: return 1;
    default: return kExitConfig;
    }
}

inline void check(polaron_status s, const char* context)
{
    if (s == POLARON_OK) return;
    throw Failure(exit_code_for(s), std::string(context) + ": " + polaron_last_error());
}

struct BathDeleter {
    void operator()(polaron_bath* p) const { polaron_bath_free(p); }
};
struct StateDeleter {
    void operator()(polaron_state* p) const { polaron_state_free(p); }
};
struct ReportDeleter {
    void operator()(polaron_report* p) const { polaron_report_free(p); }
};
struct EdDeleter {
    void operator()(polaron_ed_result* p) const { polaron_ed_result_free(p); }
};

using Bath = std::unique_ptr<polaron_bath, BathDeleter>;
using State = std::unique_ptr<polaron_state, StateDeleter>;
using Report = std::unique_ptr<polaron_report, ReportDeleter>;
using EdResult = std::unique_ptr<polaron_ed_result, EdDeleter>;

struct ModeInfo {
    double omega;
    double g;
};

inline std::vector<ModeInfo> bath_modes(const polaron_bath* bath)
{
    size_t m = 0;
    check(polaron_bath_num_modes(bath, &m), "bath");
    std::vector<ModeInfo> out(m);
    for (size_t k = 0; k < m; ++k) check(polaron_bath_mode(bath, k, &out[k].omega, &out[k].g), "bath");
    return out;
}

inline std::string bath_json(const polaron_bath* bath)
{
    size_t need = 0;
    check(polaron_bath_to_json(bath, nullptr, 0, &need), "bath json");
    std::string s(need, '\0');
    check(polaron_bath_to_json(bath, s.data(), s.size(), &need), "bath json");
    s.resize(need - 1);
    return s;
}

inline std::string report_json(const polaron_report* report)
{
    size_t need = 0;
    check(polaron_report_to_json(report, nullptr, 0, &need), "report json");
    std::string s(need, '\0');
    check(polaron_report_to_json(report, s.data(), s.size(), &need), "report json");
    s.resize(need - 1);
    return s;
}

inline polaron_report_summary summary(const polaron_report* report)
{
    polaron_report_summary s{};
    check(polaron_report_get_summary(report, &s), "report");
    return s;
}

struct StateView {
    size_t num_polarons = 0;
    size_t num_modes = 0;
    std::vector<double> weights;
    std::vector<double> displacements; // row-major
};

inline StateView view(const polaron_state* state)
{
    StateView v;
    check(polaron_state_dims(state, &v.num_polarons, &v.num_modes), "state");
    v.weights.resize(v.num_polarons);
    v.displacements.resize(v.num_polarons * v.num_modes);
    check(polaron_state_weights(state, v.weights.data(), v.weights.size()), "state");
    check(polaron_state_displacements(state, v.displacements.data(), v.displacements.size()), "state");
    return v;
}

inline State report_state(const polaron_report* report)
{
    polaron_state* s = nullptr;
    check(polaron_report_state(report, &s), "report state");
    return State(s);
}

} // namespace cli
