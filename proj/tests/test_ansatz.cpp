#include <cmath>
#include <random>
#include <vector>

#include "ansatz.hpp"
#include "bath.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "fock_oracle.hpp"
#include "observables.hpp"
#include "oracles.hpp"

using namespace polaron;

namespace {

DiscretizedBath two_modes()
{
    return DiscretizedBath(0.4, 1.0, 3.0, {{1.0, 0.45}, {0.3, 0.2}});
}

VariationalState random_state(std::mt19937_64& rng, const DiscretizedBath& bath, std::size_t n, double scale)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> c(n), f(n * bath.size());
    for (double& v : c) v = u(rng);
    c[0] = 1.0;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = scale * u(rng) * bath[i % bath.size()].g / bath[i % bath.size()].omega;
    return VariationalState(c, f, bath.size());
}

} // namespace

TEST_CASE("coherent-state overlap")
{
    const std::vector<double> f{0.3, -0.2, 1.0}, g{0.1, 0.4, 0.5};
    CHECK(overlap(f, g) == doctest::Approx(std::exp(-0.5 * (0.04 + 0.36 + 0.25))).epsilon(1e-15));
    CHECK(plus_kernel(f, g) == doctest::Approx(std::exp(-0.5 * (0.16 + 0.04 + 2.25))).epsilon(1e-15));
    CHECK(overlap(f, f) == 1.0);
    CHECK(kernel_from_exponent(-800.0) == 0.0);
    CHECK_THROWS_AS(overlap(f, std::vector<double>{1.0}), DimensionError);
}

TEST_CASE("state construction and normalization")
{
    CHECK_THROWS_AS(VariationalState({1.0, 2.0}, {0.1, 0.2, 0.3}, 2), DimensionError);
    CHECK_THROWS_AS(VariationalState({}, {}, 2), ParameterError);

    VariationalState s({-0.3, 0.7}, {0.1, 0.2, -0.1, -0.3}, 2);
    s.normalize();
    CHECK(s.weight(0) > 0);
    const EnergyTerms t = energy_terms(s, two_modes(), {0.2});
    CHECK(t.norm == doctest::Approx(1.0).epsilon(1e-14));

    const VariationalState back = VariationalState::from_json(s.to_json());
    for (std::size_t i = 0; i < 2; ++i) CHECK(back.weight(i) == s.weight(i));
    for (std::size_t i = 0; i < 4; ++i) CHECK(back.displacements()[i] == s.displacements()[i]);
    CHECK_THROWS_AS(VariationalState::from_json(R"({"C":[1],"f":[[0.1],[0.2]]})"), FormatError);
    CHECK_THROWS_AS(VariationalState::from_json("[]"), FormatError);
}

TEST_CASE("trivial energies")
{
    // undisplaced state: only the tunneling term, E = -Delta/2
    const DiscretizedBath bath = two_modes();
    CHECK(energy(VariationalState::vacuum(2), bath, {0.3}) == doctest::Approx(-0.15).epsilon(1e-15));

    // Delta = 0, one mode at the classical shift g/(2w): E = -g^2/(4w)
    const DiscretizedBath one(0.5, 1.0, 2.0, {{0.8, 0.5}});
    const std::vector<double> f{0.5 / 1.6};
    CHECK(energy(VariationalState::single(f), one, {0.0}) == doctest::Approx(-0.25 / 3.2).epsilon(1e-14));

    CHECK_THROWS_AS(energy(VariationalState::vacuum(2), bath, {-0.1}), ParameterError);
    CHECK_THROWS_AS(energy(VariationalState::vacuum(3), bath, {0.1}), DimensionError);
}

TEST_CASE("degenerate superposition is rejected")
{
    const DiscretizedBath bath = two_modes();
    const VariationalState s({1.0, -1.0}, {0.2, 0.1, 0.2, 0.1}, 2);
    CHECK_THROWS_AS(energy(s, bath, {0.1}), DegenerateStateError);
}

TEST_CASE("energy matches explicit Fock-space evaluation")
{
    std::mt19937_64 rng(11);
    const DiscretizedBath bath = two_modes();
    for (std::size_t n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            const VariationalState s = random_state(rng, bath, n, 0.6);
            const fock::Dense d = fock::build(s, 40);
            CHECK(energy(s, bath, {0.25}) == doctest::Approx(fock::energy(d, bath, 0.25)).epsilon(1e-11));
            CHECK(coherence(s) == doctest::Approx(fock::sigma_x(d)).epsilon(1e-11));
        }
    }
}

TEST_CASE("energy is invariant under row permutation, global sign and scale")
{
    std::mt19937_64 rng(5);
    const DiscretizedBath bath = discretize(SpectralDensity(0.5, 1.0), 2.0, 6);
    for (int trial = 0; trial < 20; ++trial) {
        const VariationalState s = random_state(rng, bath, 3, 0.7);
        const double e = energy(s, bath, {0.1});
        std::vector<double> c(s.weights().begin(), s.weights().end());
        std::vector<double> f(s.displacements().begin(), s.displacements().end());

        std::vector<double> c2{c[2], c[0], c[1]}, f2;
        for (std::size_t n : {2u, 0u, 1u}) f2.insert(f2.end(), f.begin() + n * 6, f.begin() + (n + 1) * 6);
        CHECK(energy(VariationalState(c2, f2, 6), bath, {0.1}) == doctest::Approx(e).epsilon(1e-13));

        for (double& v : c) v *= -2.5;
        CHECK(energy(VariationalState(c, f, 6), bath, {0.1}) == doctest::Approx(e).epsilon(1e-13));
    }
}

TEST_CASE("variational bound against exact diagonalization")
{
    std::mt19937_64 rng(17);
    const DiscretizedBath bath = two_modes();
    const EDResult ed = ed_ground(EDProblem{{bath[0], bath[1]}, 30, 0.25});
    for (int trial = 0; trial < 50; ++trial) {
        const VariationalState s = random_state(rng, bath, 1 + trial % 4, 0.8);
        CHECK(energy(s, bath, {0.25}) >= ed.energy - 1e-12);
    }
}

TEST_CASE("analytic gradient at the undisplaced state")
{
    // dE/df_k = -g_k for a single undisplaced row; dE/dC = 0 there
    const DiscretizedBath bath = discretize(SpectralDensity(0.5, 1.0), 2.0, 5);
    const Gradient g = gradient(VariationalState::vacuum(5), bath, {0.1});
    CHECK(g.energy == doctest::Approx(-0.05));
    CHECK(g.weights[0] == doctest::Approx(0.0).epsilon(1e-15));
    for (std::size_t k = 0; k < 5; ++k) CHECK(g.displacements[k] == doctest::Approx(-bath[k].g).epsilon(1e-14));
}

TEST_CASE("gradient agrees with central differences on random states")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const DiscretizedBath bath = discretize(SpectralDensity(0.6, 1.0), 1.8, 7);
    const ModelParams p{0.05};
    int checked = 0;
    for (int trial = 0; trial < 110; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const VariationalState s = random_state(rng, bath, n, 0.9);
        const Gradient g = gradient(s, bath, p);
        CHECK(g.energy == doctest::Approx(energy(s, bath, p)).epsilon(1e-14));
        std::vector<double> c(s.weights().begin(), s.weights().end());
        std::vector<double> f(s.displacements().begin(), s.displacements().end());
        const double h = 1e-5;
        auto probe = [&](std::vector<double>& v, std::size_t i) {
            const double keep = v[i];
            v[i] = keep + h;
            const double ep = energy(VariationalState(c, f, bath.size()), bath, p);
            v[i] = keep - h;
            const double em = energy(VariationalState(c, f, bath.size()), bath, p);
            v[i] = keep;
            return (ep - em) / (2 * h);
        };
        const double scale = std::max(g.max_abs(), 1e-8);
        for (std::size_t i = 0; i < n; ++i) {
            const double fd = probe(c, i);
            CHECK(std::abs(fd - g.weights[i]) <= 1e-5 * std::max(std::abs(g.weights[i]), 1e-3 * scale));
        }
        for (std::size_t i = 0; i < f.size(); i += 3) {
            const double fd = probe(f, i);
            CHECK(std::abs(fd - g.displacements[i]) <= 1e-5 * std::max(std::abs(g.displacements[i]), 1e-3 * scale));
        }
        ++checked;
    }
    CHECK(checked >= 100);
}

TEST_CASE("Silbey-Harris fixed point")
{
    const DiscretizedBath bath = discretize(SpectralDensity(0.3, 1.0), 1.5, 30);
    const SilbeyHarris sh = sh_solve(bath, {0.05});
    double s2 = 0.0;
    for (std::size_t k = 0; k < bath.size(); ++k) {
        CHECK(sh.displacements[k] == doctest::Approx(0.5 * bath[k].g / (bath[k].omega + sh.delta_r)).epsilon(1e-14));
        s2 += sh.displacements[k] * sh.displacements[k];
    }
    CHECK(sh.delta_r == doctest::Approx(0.05 * std::exp(-2 * s2)).epsilon(1e-11));

    // stationary point of the one-row functional, which equals the Rayleigh quotient there
    CHECK(silbey_harris_energy(sh.displacements, bath, {0.05}) ==
          doctest::Approx(energy(VariationalState::single(sh.displacements), bath, {0.05})).epsilon(1e-14));
    CHECK(gradient(VariationalState::single(sh.displacements), bath, {0.05}).max_abs() < 1e-10);

    // Delta = 0: classical shifts, no renormalized tunneling
    const SilbeyHarris classical = sh_solve(bath, {0.0});
    CHECK(classical.delta_r == 0.0);
    CHECK(classical.displacements[3] == doctest::Approx(0.5 * bath[3].g / bath[3].omega));
}
