#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace polaron::quad {

struct Rule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre nodes and weights by Newton iteration on P_n.
Rule gauss_legendre(std::size_t n);

struct Result {
    double value;
    double error; // estimated absolute error
    bool converged;
};

// Adaptive Gauss-Legendre: each panel is compared against its two halves and
// bisected until the difference is below its share of abs_tol. Interior
// breakpoints split the range before adaptation starts.
Result integrate(const std::function<double(double)>& f, std::span<const double> breakpoints, double abs_tol,
                 std::size_t max_depth = 50);

} // namespace polaron::quad
