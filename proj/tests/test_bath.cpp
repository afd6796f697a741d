#include <cmath>

#include "bath.hpp"
#include "doctest.h"
#include "errors.hpp"

using namespace polaron;

TEST_CASE("ohmic spectral density with hard cutoff")
{
    const SpectralDensity sd(0.3, 2.0);
    CHECK(sd(0.0) == 0.0);
    CHECK(sd(1.5) == doctest::Approx(2 * 0.3 * 1.5).epsilon(1e-15));
    CHECK(sd(2.0) == doctest::Approx(1.2));
    CHECK(sd(2.5) == 0.0);
    CHECK_THROWS_AS(sd(-1e-9), DomainError);
    CHECK_THROWS_AS(SpectralDensity(-0.1, 1.0), ParameterError);
    CHECK_THROWS_AS(SpectralDensity(0.3, 0.0), ParameterError);

    // integral of 2 a w over [lo, hi] = a (hi^2 - lo^2); band-clipped
    CHECK(sd.weight(0.5, 1.0) == doctest::Approx(0.3 * 0.75).epsilon(1e-14));
    CHECK(sd.weight(1.0, 5.0) == doctest::Approx(0.3 * 3.0).epsilon(1e-14));
    CHECK(sd.first_moment(0.0, 2.0) == doctest::Approx(2 * 0.3 * 8.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("logarithmic shells")
{
    const double alpha = 0.5, lambda = 2.0;
    const SpectralDensity sd(alpha, 1.0);
    const DiscretizedBath bath = discretize(sd, lambda, 12);
    REQUIRE(bath.size() == 12);
    double total = 0.0;
    for (std::size_t n = 0; n < bath.size(); ++n) {
        const double hi = std::pow(lambda, -static_cast<double>(n)), lo = hi / lambda;
        // weight a (hi^2 - lo^2), mean (2/3)(hi^3 - lo^3)/(hi^2 - lo^2)
        CHECK(bath[n].g * bath[n].g == doctest::Approx(alpha * (hi * hi - lo * lo)).epsilon(1e-13));
        CHECK(bath[n].omega ==
              doctest::Approx(2.0 / 3.0 * (hi * hi * hi - lo * lo * lo) / (hi * hi - lo * lo)).epsilon(1e-13));
        CHECK(bath[n].omega > lo);
        CHECK(bath[n].omega < hi);
        if (n > 0) CHECK(bath[n].omega < bath[n - 1].omega);
        total += bath[n].g * bath[n].g;
    }
    CHECK(bath.coupling_weight() == doctest::Approx(total));
    CHECK(total == doctest::Approx(alpha * (1 - std::pow(lambda, -24.0))).epsilon(1e-13));

    // Lambda close to 1 must not lose the shell widths to cancellation
    const DiscretizedBath fine = discretize(sd, 1.0 + 1e-6, 3);
    CHECK(fine[0].g * fine[0].g == doctest::Approx(alpha * (1 - std::pow(1 + 1e-6, -2.0))).epsilon(1e-8));

    CHECK_THROWS_AS(discretize(sd, 1.0, 5), ParameterError);
    CHECK_THROWS_AS(discretize(sd, 2.0, 0), ParameterError);
}

TEST_CASE("explicit mode lists are validated")
{
    CHECK_NOTHROW(DiscretizedBath(0.5, 1.0, 4.0, {{1.0, 0.6}, {0.25, 0.15}}));
    CHECK_THROWS_AS(DiscretizedBath(0.5, 1.0, 4.0, {{0.25, 0.1}, {1.0, 0.6}}), ParameterError);
    CHECK_THROWS_AS(DiscretizedBath(0.5, 1.0, 4.0, {{1.0, 0.6}, {1.0, 0.1}}), ParameterError);
    CHECK_THROWS(DiscretizedBath(0.5, 1.0, 4.0, {{-1.0, 0.6}}));
    CHECK_THROWS(DiscretizedBath(0.5, 1.0, 4.0, {{1.0, -0.6}}));
    CHECK_THROWS(DiscretizedBath(0.5, 1.0, 4.0, {}));
}

TEST_CASE("bath JSON round trip is exact")
{
    const DiscretizedBath bath = discretize(SpectralDensity(0.7, 1.0), 1.3, 20);
    const DiscretizedBath back = DiscretizedBath::from_json(bath.to_json());
    REQUIRE(back.size() == bath.size());
    CHECK(back.alpha() == bath.alpha());
    CHECK(back.lambda() == bath.lambda());
    for (std::size_t k = 0; k < bath.size(); ++k) {
        CHECK(back[k].omega == bath[k].omega);
        CHECK(back[k].g == bath[k].g);
    }
    CHECK_THROWS_AS(DiscretizedBath::from_json("{not json"), FormatError);
    CHECK_THROWS_AS(DiscretizedBath::from_json(R"({"alpha":0.5})"), FormatError);
}

TEST_CASE("continuum renormalized tunneling")
{
    // Delta (Delta e / omega_c)^{alpha/(1-alpha)}
    CHECK(renormalized_tunneling_estimate(0.5, 1.0, 0.01) == doctest::Approx(2.718281828459045e-4).epsilon(1e-12));
    CHECK(renormalized_tunneling_estimate(0.3, 1.0, 0.01) == doctest::Approx(2.1330e-3).epsilon(2e-4));
    CHECK(renormalized_tunneling_estimate(0.0, 1.0, 0.01) == doctest::Approx(0.01));
    // localized phase
    CHECK(renormalized_tunneling_estimate(1.0, 1.0, 0.01) == 0.0);
}

TEST_CASE("automatic mode count reaches below Delta_R / 100")
{
    const SpectralDensity sd(0.5, 1.0);
    const std::size_t m = auto_num_modes(sd, 1.05, 0.01);
    const double dr = renormalized_tunneling_estimate(0.5, 1.0, 0.01);
    CHECK(std::pow(1.05, -static_cast<double>(m)) <= 0.01 * dr);
    CHECK(std::pow(1.05, -static_cast<double>(m - 1)) > 0.01 * dr);
}
