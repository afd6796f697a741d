#include "observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace polaron {

namespace {

constexpr double kMinNorm = 1e-12;

void require_mode(const VariationalState& state, const DiscretizedBath& bath, std::size_t mode)
{
    if (state.num_modes() != bath.size()) throw DimensionError("observable: state and bath disagree on M");
    if (mode >= bath.size()) throw DimensionError("observable: mode index " + std::to_string(mode) + " out of range");
}

// <Psi|Psi> = 2 sum C C K-.
double norm_of(const VariationalState& s)
{
    double norm = 0.0;
    for (std::size_t a = 0; a < s.num_polarons(); ++a)
        for (std::size_t b = 0; b < s.num_polarons(); ++b)
            norm += 2.0 * s.weight(a) * s.weight(b) * overlap(s.row(a), s.row(b));
    if (!(norm >= kMinNorm)) throw DegenerateStateError("observable: <Psi|Psi> below 1e-12");
    return norm;
}

// exp(-1/2 sum_{q != k} (f_a +- f_b)^2)
double reduced_kernel(std::span<const double> fa, std::span<const double> fb, std::size_t k, double sign)
{
    double sum = 0.0;
    for (std::size_t q = 0; q < fa.size(); ++q) {
        if (q == k) continue;
        const double d = fa[q] + sign * fb[q];
        sum += d * d;
    }
    return kernel_from_exponent(-0.5 * sum);
}

std::vector<double> factorials(std::size_t n)
{
    std::vector<double> f(n + 1, 1.0);
    for (std::size_t i = 1; i <= n; ++i) f[i] = f[i - 1] * static_cast<double>(i);
    return f;
}

double ipow(double x, std::size_t p)
{
    double r = 1.0;
    for (std::size_t i = 0; i < p; ++i) r *= x;
    return r;
}

// (-1)^{m+m'}/(m! m'!) d^m/d(abar)^m d^m'/da^m' exp(-2 a abar) at a = abar = X,
// without the Gaussian factor.
double series_polynomial(std::size_t m, std::size_t mp, double x, const std::vector<double>& fact)
{
    double sum = 0.0;
    const std::size_t jmax = std::min(m, mp);
    for (std::size_t j = 0; j <= jmax; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const double term = sign * std::ldexp(1.0, static_cast<int>(m + mp - j)) * ipow(x, m + mp - 2 * j) /
                            (fact[j] * fact[m - j] * fact[mp - j]);
        sum += term;
    }
    return sum;
}

} // namespace

double coherence(const VariationalState& state)
{
    double plus = 0.0, minus = 0.0;
    for (std::size_t a = 0; a < state.num_polarons(); ++a)
        for (std::size_t b = 0; b < state.num_polarons(); ++b) {
            const double cc = state.weight(a) * state.weight(b);
            plus += cc * plus_kernel(state.row(a), state.row(b));
            minus += cc * overlap(state.row(a), state.row(b));
        }
    if (!(2.0 * minus >= kMinNorm)) throw DegenerateStateError("coherence: <Psi|Psi> below 1e-12");
    return -plus / minus;
}

double coherence_from_energy_terms(const VariationalState& state, const DiscretizedBath& bath,
                                   const ModelParams& params)
{
    const EnergyTerms t = energy_terms(state, bath, params);
    if (!(t.norm >= kMinNorm)) throw DegenerateStateError("coherence: <Psi|Psi> below 1e-12");
    return 2.0 * t.tunneling / (params.delta * t.norm);
}

double sigma_z(const VariationalState& state)
{
    double up = 0.0, down = 0.0;
    const std::size_t m = state.num_modes();
    std::vector<double> na(m), nb(m);
    for (std::size_t a = 0; a < state.num_polarons(); ++a) {
        const auto fa = state.row(a);
        std::transform(fa.begin(), fa.end(), na.begin(), [](double v) { return -v; });
        for (std::size_t b = 0; b < state.num_polarons(); ++b) {
            const auto fb = state.row(b);
            std::transform(fb.begin(), fb.end(), nb.begin(), [](double v) { return -v; });
            const double cc = state.weight(a) * state.weight(b);
            up += cc * overlap(fa, fb);
            down += cc * overlap(na, nb);
        }
    }
    const double norm = up + down;
    if (!(norm >= kMinNorm)) throw DegenerateStateError("sigma_z: <Psi|Psi> below 1e-12");
    return (up - down) / norm;
}

std::string_view to_string(WignerChannel c)
{
    return c == WignerChannel::diagonal ? "up_up" : "up_down";
}

std::string_view to_string(WignerConvention c)
{
    return c == WignerConvention::closed_form ? "closed_form" : "moment_series";
}

std::string_view to_string(MomentChannel c)
{
    switch (c) {
    case MomentChannel::identity: return "identity";
    case MomentChannel::sigma_x: return "sigma_x";
    case MomentChannel::sigma_y: return "sigma_y";
    case MomentChannel::sigma_z: return "sigma_z";
    case MomentChannel::up: return "up";
    }
    return "unknown";
}

std::vector<double> default_wigner_grid(const VariationalState& state, std::size_t mode, std::size_t points)
{
    if (mode >= state.num_modes()) throw DimensionError("wigner grid: mode index out of range");
    if (points < 2) throw ParameterError("wigner grid: need at least two points");
    double fmax = 0.0;
    for (std::size_t n = 0; n < state.num_polarons(); ++n) fmax = std::max(fmax, std::abs(state.displacement(n, mode)));
    const double half = 1.5 * fmax + 1.0;
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        // Built from both ends so that grid[i] == -grid[points-1-i] exactly.
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        grid[i] = t < 0.5 ? -half * (1.0 - 2.0 * t) : half * (2.0 * t - 1.0);
    }
    for (std::size_t i = 0; i < points / 2; ++i) grid[i] = -grid[points - 1 - i];
    return grid;
}

WignerCurve wigner_diag(const VariationalState& state, const DiscretizedBath& bath, std::size_t mode,
                        std::span<const double> x_grid)
{
    require_mode(state, bath, mode);
    const double norm = norm_of(state);
    WignerCurve curve{mode, bath[mode].omega, std::vector<double>(x_grid.begin(), x_grid.end()),
                      std::vector<double>(x_grid.size(), 0.0), WignerChannel::diagonal,
                      WignerConvention::closed_form, 0.0};
    for (std::size_t a = 0; a < state.num_polarons(); ++a)
        for (std::size_t b = 0; b < state.num_polarons(); ++b) {
            const double w = state.weight(a) * state.weight(b) * reduced_kernel(state.row(a), state.row(b), mode, -1.0);
            const double centre = 0.5 * (state.displacement(a, mode) + state.displacement(b, mode));
            for (std::size_t i = 0; i < x_grid.size(); ++i) {
                const double d = x_grid[i] - centre;
                curve.values[i] += w * std::exp(-2.0 * d * d);
            }
        }
    const double pref = 1.0 / (std::numbers::pi * norm);
    for (double& v : curve.values) v *= pref;
    return curve;
}

WignerCurve wigner_offdiag(const VariationalState& state, const DiscretizedBath& bath, std::size_t mode,
                           std::span<const double> x_grid)
{
    require_mode(state, bath, mode);
    const double norm = norm_of(state);
    WignerCurve curve{mode, bath[mode].omega, std::vector<double>(x_grid.begin(), x_grid.end()),
                      std::vector<double>(x_grid.size(), 0.0), WignerChannel::off_diagonal,
                      WignerConvention::closed_form, 0.0};
    for (std::size_t a = 0; a < state.num_polarons(); ++a)
        for (std::size_t b = 0; b < state.num_polarons(); ++b) {
            const double w = state.weight(a) * state.weight(b) * reduced_kernel(state.row(a), state.row(b), mode, 1.0);
            const double shift = 0.5 * (state.displacement(a, mode) - state.displacement(b, mode));
            for (std::size_t i = 0; i < x_grid.size(); ++i) {
                const double lo = x_grid[i] - shift;
                const double hi = x_grid[i] + shift;
                curve.values[i] += w * (std::exp(-2.0 * lo * lo) + std::exp(-2.0 * hi * hi));
            }
        }
    const double pref = 1.0 / (std::numbers::pi * norm);
    for (double& v : curve.values) v *= pref;
    return curve;
}

MomentTable mode_moments(const VariationalState& state, const DiscretizedBath& bath, std::size_t mode,
                         std::size_t m_max, MomentChannel channel)
{
    require_mode(state, bath, mode);
    if (m_max < 1) throw ParameterError("mode_moments: m_max must be at least 1");
    const double norm = norm_of(state);
    MomentTable table{channel, m_max, std::vector<double>(m_max * m_max, 0.0)};

    const bool spin_flip = channel == MomentChannel::sigma_x || channel == MomentChannel::sigma_y;
    for (std::size_t a = 0; a < state.num_polarons(); ++a)
        for (std::size_t b = 0; b < state.num_polarons(); ++b) {
            const double kernel = spin_flip ? plus_kernel(state.row(a), state.row(b)) : overlap(state.row(a), state.row(b));
            const double cc = state.weight(a) * state.weight(b) * kernel;
            const double fa = state.displacement(a, mode);
            const double fb = state.displacement(b, mode);
            for (std::size_t m = 0; m < m_max; ++m)
                for (std::size_t mp = 0; mp < m_max; ++mp) {
                    const double even = (m + mp) % 2 == 0 ? 1.0 : -1.0; // (-1)^{m+m'}
                    const double odd_m = m % 2 == 0 ? 1.0 : -1.0;
                    const double odd_mp = mp % 2 == 0 ? 1.0 : -1.0;
                    const double base = ipow(fa, m) * ipow(fb, mp);
                    double v = 0.0;
                    switch (channel) {
                    case MomentChannel::identity: v = base * (1.0 + even); break;
                    case MomentChannel::sigma_z: v = base * (1.0 - even); break;
                    case MomentChannel::up: v = base; break;
                    // <f_a| O |-f_b> and <-f_a| O |f_b> enter with the relative minus sign of the ansatz.
                    case MomentChannel::sigma_x: v = -base * (odd_mp + odd_m); break;
                    case MomentChannel::sigma_y: v = base * (odd_mp - odd_m); break;
                    }
                    table(m, mp) += cc * v;
                }
        }
    for (double& v : table.entries) v /= norm;
    return table;
}

WignerCurve wigner_from_moments(const MomentTable& table, std::span<const double> x_grid)
{
    if (table.m_max < 1 || table.entries.size() != table.m_max * table.m_max)
        throw DimensionError("wigner_from_moments: incomplete moment table");
    const auto fact = factorials(2 * table.m_max);
    const std::size_t top = table.m_max - 1;
    const bool diagonal = table.channel != MomentChannel::sigma_x && table.channel != MomentChannel::sigma_y;
    WignerCurve curve{0, 0.0, std::vector<double>(x_grid.begin(), x_grid.end()),
                      std::vector<double>(x_grid.size(), 0.0),
                      diagonal ? WignerChannel::diagonal : WignerChannel::off_diagonal,
                      WignerConvention::moment_series, 0.0};
    const double pref = 2.0 / std::numbers::pi;
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const double x = x_grid[i];
        const double gauss = std::exp(-2.0 * x * x);
        double sum = 0.0, tail = 0.0;
        for (std::size_t m = 0; m < table.m_max; ++m)
            for (std::size_t mp = 0; mp < table.m_max; ++mp) {
                const double a = table(m, mp);
                if (a == 0.0) continue;
                const double term = a * series_polynomial(m, mp, x, fact) * gauss;
                sum += term;
                if (m == top || mp == top) tail += term;
            }
        curve.values[i] = pref * sum;
        curve.tail_magnitude = std::max(curve.tail_magnitude, pref * std::abs(tail));
    }
    return curve;
}

} // namespace polaron
