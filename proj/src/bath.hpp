#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace polaron {

// Ohmic spectral density with a hard cutoff: J(w) = 2 alpha w for w <= omega_c.
class SpectralDensity {
public:
    SpectralDensity(double alpha, double omega_c);

    double alpha() const noexcept { return alpha_; }
    double omega_c() const noexcept { return omega_c_; }

    // Throws DomainError for omega < 0.
    double operator()(double omega) const;

    // Closed-form integrals of J and w J over [lo, hi], clipped to the band.
    double weight(double lo, double hi) const;
    double first_moment(double lo, double hi) const;

private:
    double alpha_;
    double omega_c_;
};

struct Mode {
    double omega;
    double g;
};

// Finite set of bath modes, ordered by strictly decreasing frequency. Built
// either from logarithmic shells of a SpectralDensity or from an explicit
// mode list (small exact-diagonalization instances).
class DiscretizedBath {
public:
    DiscretizedBath(double alpha, double omega_c, double lambda, std::vector<Mode> modes);

    double alpha() const noexcept { return alpha_; }
    double omega_c() const noexcept { return omega_c_; }
    double lambda() const noexcept { return lambda_; }

    std::size_t size() const noexcept { return modes_.size(); }
    const Mode& operator[](std::size_t k) const { return modes_[k]; }
    std::span<const Mode> modes() const noexcept { return modes_; }

    std::vector<double> frequencies() const;
    std::vector<double> couplings() const;

    // Sum_k g_k^2.
    double coupling_weight() const;

    std::string to_json() const;
    static DiscretizedBath from_json(const std::string& text);

private:
    double alpha_;
    double omega_c_;
    double lambda_;
    std::vector<Mode> modes_;
};

// Shell n covers [omega_c L^{-n-1}, omega_c L^{-n}]; g_n^2 is the J-weight of
// the shell and omega_n its J-weighted mean frequency.
DiscretizedBath discretize(const SpectralDensity& sd, double lambda, std::size_t num_modes);

// Continuum estimate Delta (Delta e / omega_c)^{alpha/(1-alpha)} of the
// renormalized tunneling, valid for alpha < 1 and Delta << omega_c.
double renormalized_tunneling_estimate(double alpha, double omega_c, double delta);

// Smallest M with omega_c L^{-M} <= 0.01 * renormalized_tunneling_estimate.
std::size_t auto_num_modes(const SpectralDensity& sd, double lambda, double delta);

} // namespace polaron
