#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ansatz.hpp"
#include "bath.hpp"

namespace polaron {

// <sigma_x> = -sum C C K+ / sum C C K-. Equals -Delta_R/Delta for a
// Silbey-Harris state and -1 for the undisplaced state.
double coherence(const VariationalState& state);

// Same quantity from the tunneling term of <Psi|H|Psi>: 2 E_tunnel / (Delta <Psi|Psi>).
double coherence_from_energy_terms(const VariationalState& state, const DiscretizedBath& bath,
                                   const ModelParams& params);

// <sigma_z> from the separately accumulated up and down branch weights.
double sigma_z(const VariationalState& state);

enum class WignerChannel { diagonal, off_diagonal };

// closed_form: prefactor 1/(pi <Psi|Psi>) and positive off-diagonal sign, as
// in the coherent-state closed forms. moment_series: the physical
// normalization (2/pi) of the characteristic-function expansion. For the same
// state, moment_series = 2 * closed_form on the diagonal (up-projector)
// channel and -2 * closed_form on the off-diagonal (sigma_x) channel.
enum class WignerConvention { closed_form, moment_series };

struct WignerCurve {
    std::size_t mode_index = 0;
    double omega = 0.0;
    std::vector<double> x;
    std::vector<double> values;
    WignerChannel channel = WignerChannel::diagonal;
    WignerConvention convention = WignerConvention::closed_form;
    // Largest |contribution| of the highest retained moment order; only set
    // for moment_series curves. Large values flag an unconverged expansion.
    double tail_magnitude = 0.0;
};

std::string_view to_string(WignerChannel c);
std::string_view to_string(WignerConvention c);

// Uniform symmetric grid over [-(1.5 max|f_k| + 1), +(1.5 max|f_k| + 1)].
std::vector<double> default_wigner_grid(const VariationalState& state, std::size_t mode, std::size_t points = 301);

// Spin-projected (|up><up|) single-mode Wigner slice at zero momentum.
WignerCurve wigner_diag(const VariationalState& state, const DiscretizedBath& bath, std::size_t mode,
                        std::span<const double> x_grid);

// sigma_x-inserted single-mode Wigner slice; even in X by construction.
WignerCurve wigner_offdiag(const VariationalState& state, const DiscretizedBath& bath, std::size_t mode,
                           std::span<const double> x_grid);

enum class MomentChannel { identity, sigma_x, sigma_y, sigma_z, up };

std::string_view to_string(MomentChannel c);

// A_{m,m'} = <Psi| s [a^dag]^m a^m' |Psi> / <Psi|Psi> for 0 <= m, m' < m_max.
// The sigma_y entries are purely imaginary for real displacements; the table
// stores their imaginary part. up is the projector (1 + sigma_z)/2.
struct MomentTable {
    MomentChannel channel = MomentChannel::identity;
    std::size_t m_max = 0;
    std::vector<double> entries; // row-major m_max x m_max

    double operator()(std::size_t m, std::size_t mp) const { return entries[m * m_max + mp]; }
    double& operator()(std::size_t m, std::size_t mp) { return entries[m * m_max + mp]; }
};

MomentTable mode_moments(const VariationalState& state, const DiscretizedBath& bath, std::size_t mode,
                         std::size_t m_max, MomentChannel channel);

// W(X) = (2/pi) sum A_{m,m'} (-1)^{m+m'}/(m! m'!) d^m/d(abar)^m d^m'/d(a)^m' exp(-2 a abar)
// at a = abar = X, truncated at m_max. The result is tagged moment_series.
WignerCurve wigner_from_moments(const MomentTable& table, std::span<const double> x_grid);

} // namespace polaron
