#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace polaron::quad {

Rule gauss_legendre(std::size_t n)
{
    if (n < 1) throw ParameterError("gauss_legendre: need at least one node");
    Rule r{std::vector<double>(n), std::vector<double>(n)};
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * static_cast<double>(j) - 1.0) * z * p2 - (static_cast<double>(j) - 1.0) * p3) /
                     static_cast<double>(j);
            }
            dp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        // Recompute the derivative at the converged node.
        double p1 = 1.0, p2 = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
            const double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * static_cast<double>(j) - 1.0) * z * p2 - (static_cast<double>(j) - 1.0) * p3) /
                 static_cast<double>(j);
        }
        dp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        r.nodes[i] = -z;
        r.nodes[n - 1 - i] = z;
        r.weights[i] = r.weights[n - 1 - i] = w;
    }
    return r;
}

namespace {

const Rule& rule20()
{
    static const Rule r = gauss_legendre(20);
    return r;
}

double apply(const std::function<double(double)>& f, double a, double b)
{
    const Rule& r = rule20();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * f(mid + half * r.nodes[i]);
    return half * sum;
}

void adapt(const std::function<double(double)>& f, double a, double b, double whole, double tol, std::size_t depth,
           Result& acc)
{
    const double mid = 0.5 * (a + b);
    const double left = apply(f, a, mid);
    const double right = apply(f, mid, b);
    const double diff = std::abs(left + right - whole);
    if (diff <= tol || depth == 0 || !(mid > a && mid < b)) {
        acc.value += left + right;
        acc.error += diff;
        if (diff > tol) acc.converged = false;
        return;
    }
    adapt(f, a, mid, left, 0.5 * tol, depth - 1, acc);
    adapt(f, mid, b, right, 0.5 * tol, depth - 1, acc);
}

} // namespace

Result integrate(const std::function<double(double)>& f, std::span<const double> breakpoints, double abs_tol,
                 std::size_t max_depth)
{
    std::vector<double> pts(breakpoints.begin(), breakpoints.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 2) throw ParameterError("integrate: need at least two breakpoints");
    Result acc{0.0, 0.0, true};
    const double span = pts.back() - pts.front();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i], b = pts[i + 1];
        // Tolerance shared by panel width, with a floor so tiny panels still get a fair share.
        const double share = std::max((b - a) / span, 1.0 / static_cast<double>(4 * pts.size()));
        adapt(f, a, b, apply(f, a, b), abs_tol * share, max_depth, acc);
    }
    return acc;
}

} // namespace polaron::quad
