#include <cmath>
#include <vector>

#include "ansatz.hpp"
#include "bath.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "observables.hpp"
#include "optimizer.hpp"
#include "oracles.hpp"
#include "quadrature.hpp"

using namespace polaron;

TEST_CASE("exact diagonalization: decoupled spin")
{
    const EDResult r = ed_ground(EDProblem{{{1.0, 0.0}, {0.3, 0.0}}, 10, 0.2});
    CHECK(r.energy == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(r.coherence == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(r.residual < 1e-9);
}

TEST_CASE("exact diagonalization: displaced oscillator at zero tunneling")
{
    const EDResult r = ed_ground(EDProblem{{{0.7, 0.9}}, 40, 0.0});
    CHECK(r.energy == doctest::Approx(-0.81 / 2.8).epsilon(1e-12));
    CHECK(r.cutoff_converged);
}

TEST_CASE("exact diagonalization: two-level limit of a far-detuned mode")
{
    // weak coupling second order: E = -Delta/2 - (g^2/4) / (w + Delta)
    const double g = 1e-3, w = 1.0, d = 0.2;
    const EDResult r = ed_ground(EDProblem{{{w, g}}, 12, d});
    CHECK(r.energy == doctest::Approx(-d / 2 - g * g / 4 / (w + d)).epsilon(1e-11));
}

TEST_CASE("exact diagonalization rejects oversized or malformed problems")
{
    CHECK_THROWS_AS(ed_ground(EDProblem{{{1, 0.1}, {0.5, 0.1}, {0.2, 0.1}, {0.1, 0.1}}, 40, 0.1}), DimensionError);
    CHECK_THROWS_AS(ed_ground(EDProblem{{{1, 0.1}}, 4, 0.1}), ParameterError);
    CHECK_THROWS_AS(ed_ground(EDProblem{{}, 10, 0.1}), ParameterError);
    CHECK(ed_dimension(3, 30) == 2 * 31 * 31 * 31);
}

TEST_CASE("ED moments agree with the converged variational state")
{
    const std::vector<Mode> modes{{1.0, 0.6}, {0.25, 0.3}};
    const EDProblem problem{modes, 24, 0.1};
    const EDResult ed = ed_ground(problem);
    const DiscretizedBath bath(0.5, 1.0, 4.0, modes);
    const auto l = solve_ladder(bath, {0.1}, OptimizerConfig{}, 5);
    for (MomentChannel ch : {MomentChannel::identity, MomentChannel::sigma_x, MomentChannel::sigma_z,
                             MomentChannel::up, MomentChannel::sigma_y}) {
        for (std::size_t k = 0; k < 2; ++k) {
            const MomentTable a = ed_moments(problem, ed.ground_state, k, 6, ch);
            const MomentTable b = mode_moments(l.back().state, bath, k, 6, ch);
            double worst = 0.0;
            for (std::size_t i = 0; i < a.entries.size(); ++i)
                worst = std::max(worst, std::abs(a.entries[i] - b.entries[i]));
            CHECK(worst < 1e-3);
        }
    }
    CHECK(ed_moments(problem, ed.ground_state, 0, 3, MomentChannel::sigma_x)(0, 0) ==
          doctest::Approx(ed.coherence).epsilon(1e-12));
}

TEST_CASE("three-mode reference instance")
{
    std::vector<Mode> modes;
    for (int n = 0; n < 3; ++n)
        modes.push_back({std::pow(4.0, -n), std::sqrt(0.5 * (std::pow(4.0, -2 * n) - std::pow(4.0, -2 * n - 2)))});
    const EDResult r = ed_ground(EDProblem{modes, 30, 0.1});
    // frozen from this solver; the variational ladder approaches it from above
    CHECK(r.energy == doctest::Approx(-0.18390849453612).epsilon(1e-12));
    CHECK(r.coherence == doctest::Approx(-0.67675033640909).epsilon(1e-9));
    CHECK(r.cutoff_converged);
    CHECK(r.check_cutoff == 34);
}

TEST_CASE("Toulouse line")
{
    // T -> 0 closed form: (D/w)[ln(1 + D^2/T_K^2)/2 + T_K^2/(D^2 + T_K^2) - 1]
    const double d = 0.01, wc = 1.0;
    const double tk = d * d / wc, D = 4 * wc / M_PI;
    const double closed = d / wc * (0.5 * std::log1p(D * D / (tk * tk)) + tk * tk / (D * D + tk * tk) - 1);
    CHECK(toulouse_coherence_zero_temperature(d, wc) == doctest::Approx(closed).epsilon(1e-14));
    CHECK(toulouse_coherence_zero_temperature(d, wc) == doctest::Approx(0.08452).epsilon(1e-4));
    CHECK(toulouse_coherence({d, wc, 0.0}) == doctest::Approx(closed).epsilon(1e-14));
    CHECK(toulouse_coherence({d, wc, 1e-9}) == doctest::Approx(closed).epsilon(1e-8));
    CHECK(toulouse_coherence({d, wc, 1e-7}) == doctest::Approx(0.0845).epsilon(1e-3));

    ToulouseParams p{d, wc, 0.0};
    CHECK(p.kondo_scale() == doctest::Approx(1e-4));
    CHECK(p.bandwidth() == doctest::Approx(4 / M_PI));

    // monotone decrease over [1e-6, 1e-1]
    double prev = toulouse_coherence({d, wc, 1e-6});
    for (int i = 1; i <= 40; ++i) {
        const double T = 1e-6 * std::pow(1e5, i / 40.0);
        const double v = toulouse_coherence({d, wc, T});
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(toulouse_coherence({d, wc, -1.0}), DomainError);
}

TEST_CASE("Toulouse quadrature against a brute-force refinement")
{
    const double d = 0.01, wc = 1.0, T = 3e-3;
    const double tk = d * d / wc, D = 4 * wc / M_PI;
    auto integrand = [&](double e) {
        const double x = -e / T;
        const double lg = x > 30 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
        return T * lg * (e * e - tk * tk) / ((e * e + tk * tk) * (e * e + tk * tk));
    };
    // dense composite Gauss-Legendre on a fixed geometric mesh
    const auto rule = quad::gauss_legendre(20);
    std::vector<double> cuts{-D, D, 0.0};
    for (double s = 1e-7; s < D; s *= 1.2) {
        cuts.push_back(s);
        cuts.push_back(-s);
    }
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
            sum += 0.5 * (b - a) * rule.weights[j] * integrand(0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[j]);
    }
    CHECK(toulouse_coherence({d, wc, T}) == doctest::Approx(4 * d / (M_PI * D) * sum).epsilon(1e-9));
}

TEST_CASE("one-polaron thermal coherence")
{
    const double dr = 2.7e-4, d = 0.01;
    CHECK(onepolaron_thermal(dr, d, 0.0) == doctest::Approx(dr / d).epsilon(1e-15));
    CHECK(onepolaron_thermal(dr, d, dr / 2) == doctest::Approx(dr / d * std::tanh(1.0)).epsilon(1e-15));
    CHECK(std::tanh(1.0) == doctest::Approx(0.76159).epsilon(1e-5));
    CHECK(onepolaron_thermal(dr, d, 1.0) == doctest::Approx(dr * dr / (2 * d)).epsilon(1e-7));
    CHECK_THROWS_AS(onepolaron_thermal(dr, d, -1.0), DomainError);
}
