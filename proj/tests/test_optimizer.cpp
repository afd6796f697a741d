#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ansatz.hpp"
#include "bath.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "observables.hpp"
#include "optimizer.hpp"
#include "oracles.hpp"

using namespace polaron;

namespace {

DiscretizedBath small_bath()
{
    return discretize(SpectralDensity(0.5, 1.0), 2.0, 10);
}

} // namespace

TEST_CASE("crossover grid is log-spaced between the endpoints")
{
    const auto g = crossover_grid(1e-4, 1e-2, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == doctest::Approx(1e-4));
    CHECK(g.back() == doctest::Approx(1e-2));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(std::sqrt(10.0)));
    CHECK(crossover_grid(1e-4, 1e-2, 1).front() == doctest::Approx(1e-3));
    CHECK(crossover_grid(1e-4, 1e-2, 0).empty());
}

TEST_CASE("config validation")
{
    OptimizerConfig c;
    c.grad_tol = 0;
    CHECK_THROWS_AS(validate(c), ParameterError);
    c = {};
    c.memory = 0;
    CHECK_THROWS_AS(validate(c), ParameterError);
    c = {};
    c.crossover_grid = {1e-3, -1.0};
    CHECK_THROWS_AS(validate(c), ParameterError);
}

TEST_CASE("one row from the undisplaced state reaches the Silbey-Harris point")
{
    const DiscretizedBath bath = small_bath();
    const ModelParams p{0.05};
    const SolveReport r = optimize(VariationalState::vacuum(bath.size()), bath, p, OptimizerConfig{});
    REQUIRE(r.converged);
    CHECK(r.grad_norm <= 1e-9);
    const SilbeyHarris sh = sh_solve(bath, p);
    for (std::size_t k = 0; k < bath.size(); ++k)
        CHECK(r.state.displacement(0, k) == doctest::Approx(sh.displacements[k]).epsilon(1e-7));
    CHECK(-coherence(r.state) == doctest::Approx(sh.delta_r / p.delta).epsilon(1e-7));
    CHECK(r.energy == doctest::Approx(silbey_harris_energy(sh.displacements, bath, p)).epsilon(1e-13));
}

TEST_CASE("ladder energies decrease and stay above the exact ground state")
{
    const std::vector<Mode> modes{{1.0, 0.6}, {0.25, 0.15}};
    const DiscretizedBath bath(0.5, 1.0, 4.0, modes);
    const ModelParams p{0.1};
    const EDResult ed = ed_ground(EDProblem{modes, 30, 0.1});
    const auto l = solve_ladder(bath, p, OptimizerConfig{}, 4);
    REQUIRE(l.size() == 4);
    for (std::size_t n = 0; n < l.size(); ++n) {
        CHECK(l[n].state.num_polarons() <= n + 1);
        CHECK(l[n].energy >= ed.energy - 1e-12);
        CHECK(l[n].energy_history_per_n.size() == n + 1);
        if (n > 0) CHECK(l[n].energy <= l[n - 1].energy + 1e-14);
    }
    CHECK((l.back().energy - ed.energy) / std::abs(ed.energy) < 1e-5);
}

TEST_CASE("grown rows carry the antipolaron sign pattern")
{
    const DiscretizedBath bath = discretize(SpectralDensity(0.5, 1.0), 1.3, 45);
    const auto l = solve_ladder(bath, {0.01}, OptimizerConfig{}, 2);
    const VariationalState& s = l[1].state;
    REQUIRE(s.num_polarons() == 2);
    CHECK(s.displacement(1, 0) > 0);                   // polaronic at high frequency
    CHECK(s.displacement(1, s.num_modes() - 1) < 0);  // antipolaronic at low frequency
    CHECK(-coherence(s) > 1.5 * -coherence(l[0].state));
}

TEST_CASE("runs are deterministic")
{
    const DiscretizedBath bath = small_bath();
    const auto a = solve_ladder(bath, {0.05}, OptimizerConfig{}, 3);
    const auto b = solve_ladder(bath, {0.05}, OptimizerConfig{}, 3);
    for (std::size_t n = 0; n < 3; ++n) {
        CHECK(a[n].energy == b[n].energy);
        CHECK(a[n].to_json() == b[n].to_json());
    }
}

TEST_CASE("prune drops rows that carry no weight")
{
    const DiscretizedBath bath = small_bath();
    const SilbeyHarris sh = sh_solve(bath, {0.05});
    VariationalState s = VariationalState::single(sh.displacements);
    std::vector<double> other(sh.displacements);
    for (double& v : other) v = -v;
    s.append(0.0, other);
    CHECK(prune(s, 1e-10) == 1);
    CHECK(s.num_polarons() == 1);
}

TEST_CASE("trace records the iteration history")
{
    const DiscretizedBath bath = small_bath();
    OptimizerConfig c;
    c.record_trace = true;
    const SolveReport r = optimize(VariationalState::vacuum(bath.size()), bath, {0.05}, c);
    REQUIRE(!r.trace.empty());
    CHECK(r.trace.back().energy == doctest::Approx(r.energy));
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].energy <= r.trace[i - 1].energy + 1e-15);
}

TEST_CASE("iteration cap is reported, not thrown")
{
    const DiscretizedBath bath = small_bath();
    OptimizerConfig c;
    c.max_iters = 3;
    const SolveReport r = optimize(VariationalState::vacuum(bath.size()), bath, {0.05}, c);
    CHECK_FALSE(r.converged);
    CHECK_FALSE(r.diagnostics.empty());
}

TEST_CASE("incremental growth matches joint optimization from random starts")
{
    const std::vector<Mode> modes{{1.0, 0.6}, {0.25, 0.15}};
    const DiscretizedBath bath(0.5, 1.0, 4.0, modes);
    const ModelParams p{0.1};
    const auto ladder = solve_ladder(bath, p, OptimizerConfig{}, 3);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n = 2; n <= 3; ++n) {
        double best = 0.0;
        for (int start = 0; start < 8; ++start) {
            std::vector<double> c(n), f(n * 2);
            for (double& v : c) v = u(rng);
            for (double& v : f) v = 0.6 * u(rng);
            const SolveReport r = optimize(VariationalState(c, f, 2), bath, p, OptimizerConfig{});
            best = std::min(best, r.energy);
        }
        CHECK(best == doctest::Approx(ladder[n - 1].energy).epsilon(1e-9));
    }
}
