#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bath.hpp"

namespace polaron {

struct ModelParams {
    double delta; // bare tunneling, units of omega_c; 0 is the classical limit
};

void validate(const ModelParams& params);

// Coherent-state expansion
//   |Psi> = sum_n C_n ( |up> (x) |+f^(n)> - |down> (x) |-f^(n)> ).
// Stored unnormalized; rows of the displacement matrix are polarons, columns
// bath modes.
class VariationalState {
public:
    VariationalState(std::vector<double> weights, std::vector<double> displacements, std::size_t num_modes);

    // Single row with all displacements zero and C_1 = 1.
    static VariationalState vacuum(std::size_t num_modes);
    static VariationalState single(std::span<const double> displacements);

    std::size_t num_polarons() const noexcept { return weights_.size(); }
    std::size_t num_modes() const noexcept { return num_modes_; }

    std::span<const double> weights() const noexcept { return weights_; }
    std::span<double> weights() noexcept { return weights_; }
    double weight(std::size_t n) const { return weights_[n]; }

    std::span<const double> row(std::size_t n) const { return {displacements_.data() + n * num_modes_, num_modes_}; }
    std::span<double> row(std::size_t n) { return {displacements_.data() + n * num_modes_, num_modes_}; }
    double displacement(std::size_t n, std::size_t k) const { return displacements_[n * num_modes_ + k]; }

    // Row-major N x M.
    std::span<const double> displacements() const noexcept { return displacements_; }

    void append(double weight, std::span<const double> displacements);
    void erase(std::size_t n);

    // Rescale so that <Psi|Psi> = 1 and C_1 > 0. Observables are unchanged.
    void normalize();

    std::string to_json() const;
    static VariationalState from_json(const std::string& text);

private:
    std::vector<double> weights_;
    std::vector<double> displacements_;
    std::size_t num_modes_;
};

// exp(-1/2 sum_k (f_k - g_k)^2), the overlap of two real coherent states.
double overlap(std::span<const double> f, std::span<const double> g);

// Kernel helpers; exponents below -700 clamp to zero.
double kernel_from_exponent(double exponent);
double plus_kernel(std::span<const double> f, std::span<const double> g); // exp(-1/2 sum (f+g)^2)

// The three double sums making up <Psi|H|Psi>, together with the norm.
struct EnergyTerms {
    double tunneling;   // -Delta sum C C K+
    double oscillator;  // sum C C K- sum_k 2 w_k f f
    double coupling;    // -sum C C K- sum_k g_k (f + f)
    double norm;        // 2 sum C C K-

    double numerator() const { return tunneling + oscillator + coupling; }
};

EnergyTerms energy_terms(const VariationalState& state, const DiscretizedBath& bath, const ModelParams& params);

// Rayleigh quotient <Psi|H|Psi>/<Psi|Psi>; DegenerateStateError if the norm is
// below 1e-12.
double energy(const VariationalState& state, const DiscretizedBath& bath, const ModelParams& params);

struct Gradient {
    std::vector<double> weights;       // dE/dC_n
    std::vector<double> displacements; // dE/df^(n)_k, row-major
    double energy;

    double max_abs() const;
};

Gradient gradient(const VariationalState& state, const DiscretizedBath& bath, const ModelParams& params);

// Silbey-Harris energy functional evaluated directly for one displacement vector.
double silbey_harris_energy(std::span<const double> f, const DiscretizedBath& bath, const ModelParams& params);

struct SilbeyHarris {
    std::vector<double> displacements;
    double delta_r;
    std::size_t iterations;
};

// Fixed point Delta_R <- Delta exp(-2 sum_k (g_k/2)^2/(w_k + Delta_R)^2)
// started from Delta_R = Delta; stops at relative change < 1e-12.
SilbeyHarris sh_solve(const DiscretizedBath& bath, const ModelParams& params);

} // namespace polaron
