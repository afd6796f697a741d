#include "bath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "errors.hpp"

namespace polaron {

SpectralDensity::SpectralDensity(double alpha, double omega_c) : alpha_(alpha), omega_c_(omega_c)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ParameterError("spectral density: alpha must be positive");
    if (!(omega_c > 0.0) || !std::isfinite(omega_c))
        throw ParameterError("spectral density: omega_c must be positive");
}

double SpectralDensity::operator()(double omega) const
{
    if (!(omega >= 0.0))
        throw DomainError("spectral density: omega must be non-negative");
    return omega <= omega_c_ ? 2.0 * alpha_ * omega : 0.0;
}

double SpectralDensity::weight(double lo, double hi) const
{
    lo = std::clamp(lo, 0.0, omega_c_);
    hi = std::clamp(hi, 0.0, omega_c_);
    if (hi <= lo) return 0.0;
    return alpha_ * (hi - lo) * (hi + lo);
}

double SpectralDensity::first_moment(double lo, double hi) const
{
    lo = std::clamp(lo, 0.0, omega_c_);
    hi = std::clamp(hi, 0.0, omega_c_);
    if (hi <= lo) return 0.0;
    return 2.0 * alpha_ / 3.0 * (hi - lo) * (hi * hi + hi * lo + lo * lo);
}

DiscretizedBath::DiscretizedBath(double alpha, double omega_c, double lambda, std::vector<Mode> modes)
    : alpha_(alpha), omega_c_(omega_c), lambda_(lambda), modes_(std::move(modes))
{
    if (modes_.empty()) throw ParameterError("bath: at least one mode required");
    for (std::size_t k = 0; k < modes_.size(); ++k) {
        const Mode& m = modes_[k];
        if (!(m.omega > 0.0) || !std::isfinite(m.omega))
            throw ParameterError("bath: mode frequencies must be positive");
        if (!(m.g >= 0.0) || !std::isfinite(m.g))
            throw ParameterError("bath: couplings must be non-negative");
        if (k > 0 && !(m.omega < modes_[k - 1].omega))
            throw ParameterError("bath: mode frequencies must be strictly decreasing");
    }
}

std::vector<double> DiscretizedBath::frequencies() const
{
    std::vector<double> out(modes_.size());
    std::transform(modes_.begin(), modes_.end(), out.begin(), [](const Mode& m) { return m.omega; });
    return out;
}

std::vector<double> DiscretizedBath::couplings() const
{
    std::vector<double> out(modes_.size());
    std::transform(modes_.begin(), modes_.end(), out.begin(), [](const Mode& m) { return m.g; });
    return out;
}

double DiscretizedBath::coupling_weight() const
{
    double sum = 0.0;
    for (const Mode& m : modes_) sum += m.g * m.g;
    return sum;
}

std::string DiscretizedBath::to_json() const
{
    nlohmann::json j;
    j["alpha"] = alpha_;
    j["omega_c"] = omega_c_;
    j["lambda"] = lambda_;
    auto& arr = j["modes"] = nlohmann::json::array();
    for (const Mode& m : modes_) arr.push_back({{"omega", m.omega}, {"g", m.g}});
    return j.dump();
}

DiscretizedBath DiscretizedBath::from_json(const std::string& text)
{
    try {
        const auto j = nlohmann::json::parse(text);
        std::vector<Mode> modes;
        for (const auto& m : j.at("modes"))
            modes.push_back({m.at("omega").get<double>(), m.at("g").get<double>()});
        return DiscretizedBath(j.at("alpha").get<double>(), j.at("omega_c").get<double>(),
                               j.at("lambda").get<double>(), std::move(modes));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bath json: ") + e.what());
    }
}

DiscretizedBath discretize(const SpectralDensity& sd, double lambda, std::size_t num_modes)
{
    if (!(lambda > 1.0) || !std::isfinite(lambda))
        throw ParameterError("discretize: lambda must exceed 1");
    if (num_modes < 1) throw ParameterError("discretize: num_modes must be at least 1");

    const double wc = sd.omega_c();
    const double log_lambda = std::log(lambda);
    // 1 - L^{-2} and 1 - L^{-3} via expm1 keep the shell widths accurate as L -> 1.
    const double width2 = -std::expm1(-2.0 * log_lambda);
    const double width3 = -std::expm1(-3.0 * log_lambda);

    std::vector<Mode> modes;
    modes.reserve(num_modes);
    for (std::size_t n = 0; n < num_modes; ++n) {
        const double top = wc * std::exp(-static_cast<double>(n) * log_lambda);
        const double weight = sd.alpha() * top * top * width2;
        const double moment = 2.0 * sd.alpha() / 3.0 * top * top * top * width3;
        modes.push_back({moment / weight, std::sqrt(weight)});
    }
    return DiscretizedBath(sd.alpha(), wc, lambda, std::move(modes));
}

double renormalized_tunneling_estimate(double alpha, double omega_c, double delta)
{
    if (!(alpha < 1.0)) return 0.0;
    return delta * std::pow(delta * std::exp(1.0) / omega_c, alpha / (1.0 - alpha));
}

std::size_t auto_num_modes(const SpectralDensity& sd, double lambda, double delta)
{
    if (!(lambda > 1.0)) throw ParameterError("auto_num_modes: lambda must exceed 1");
    if (!(delta > 0.0)) throw ParameterError("auto_num_modes: delta must be positive");
    const double target = 0.01 * renormalized_tunneling_estimate(sd.alpha(), sd.omega_c(), delta);
    if (!(target > std::numeric_limits<double>::min()))
        throw ParameterError("auto_num_modes: renormalized tunneling estimate vanishes; set num_modes");
    const double m = std::log(sd.omega_c() / target) / std::log(lambda);
    return static_cast<std::size_t>(std::max(1.0, std::ceil(m)));
}

} // namespace polaron
