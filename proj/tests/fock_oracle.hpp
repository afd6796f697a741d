#pragma once

// Brute-force reference for tests: a coherent-state expansion written out in
// a truncated product Fock basis, with H applied term by term.

#include <cmath>
#include <cstddef>
#include <vector>

#include "ansatz.hpp"
#include "bath.hpp"

namespace fock {

struct Dense {
    std::size_t modes;
    std::size_t cutoff; // states 0..cutoff per mode
    std::vector<double> psi; // [spin][n_0]...[n_{M-1}], spin 0 = up

    std::size_t per_spin() const
    {
        std::size_t b = 1;
        for (std::size_t k = 0; k < modes; ++k) b *= cutoff + 1;
        return b;
    }
    std::size_t stride(std::size_t k) const
    {
        std::size_t s = 1;
        for (std::size_t q = k + 1; q < modes; ++q) s *= cutoff + 1;
        return s;
    }
    std::size_t occupation(std::size_t index, std::size_t k) const { return (index / stride(k)) % (cutoff + 1); }
};

inline std::vector<double> coherent(double f, std::size_t cutoff)
{
    std::vector<double> c(cutoff + 1);
    c[0] = std::exp(-0.5 * f * f);
    for (std::size_t n = 1; n <= cutoff; ++n) c[n] = c[n - 1] * f / std::sqrt(static_cast<double>(n));
    return c;
}

inline Dense build(const polaron::VariationalState& s, std::size_t cutoff)
{
    Dense d{s.num_modes(), cutoff, {}};
    const std::size_t b = d.per_spin();
    d.psi.assign(2 * b, 0.0);
    for (std::size_t n = 0; n < s.num_polarons(); ++n) {
        std::vector<std::vector<double>> up(d.modes), dn(d.modes);
        for (std::size_t k = 0; k < d.modes; ++k) {
            up[k] = coherent(s.displacement(n, k), cutoff);
            dn[k] = coherent(-s.displacement(n, k), cutoff);
        }
        for (std::size_t i = 0; i < b; ++i) {
            double pu = 1.0, pd = 1.0;
            for (std::size_t k = 0; k < d.modes; ++k) {
                pu *= up[k][d.occupation(i, k)];
                pd *= dn[k][d.occupation(i, k)];
            }
            d.psi[i] += s.weight(n) * pu;
            d.psi[b + i] -= s.weight(n) * pd;
        }
    }
    return d;
}

// H = Delta/2 sigma_x - sigma_z/2 sum g (a + a^dag) + sum w a^dag a
inline std::vector<double> apply_h(const Dense& d, const polaron::DiscretizedBath& bath, double delta)
{
    const std::size_t b = d.per_spin();
    std::vector<double> out(2 * b, 0.0);
    for (std::size_t s = 0; s < 2; ++s) {
        const double sz = s == 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < b; ++i) {
            const double v = d.psi[s * b + i];
            out[(1 - s) * b + i] += 0.5 * delta * v;
            for (std::size_t k = 0; k < d.modes; ++k) {
                const std::size_t n = d.occupation(i, k);
                out[s * b + i] += bath[k].omega * static_cast<double>(n) * v;
                const double c = -0.5 * sz * bath[k].g;
                if (n < d.cutoff) out[s * b + i + d.stride(k)] += c * std::sqrt(static_cast<double>(n + 1)) * v;
                if (n > 0) out[s * b + i - d.stride(k)] += c * std::sqrt(static_cast<double>(n)) * v;
            }
        }
    }
    return out;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double energy(const Dense& d, const polaron::DiscretizedBath& bath, double delta)
{
    return dot(d.psi, apply_h(d, bath, delta)) / dot(d.psi, d.psi);
}

inline double sigma_x(const Dense& d)
{
    const std::size_t b = d.per_spin();
    double s = 0.0;
    for (std::size_t i = 0; i < b; ++i) s += 2.0 * d.psi[i] * d.psi[b + i];
    return s / dot(d.psi, d.psi);
}

} // namespace fock
