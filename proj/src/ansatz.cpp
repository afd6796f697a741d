#include "ansatz.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "errors.hpp"

namespace polaron {

namespace {

constexpr double kMinNorm = 1e-12;
constexpr double kMinExponent = -700.0;

void require_match(const VariationalState& state, const DiscretizedBath& bath)
{
    if (state.num_modes() != bath.size())
        throw DimensionError("state has " + std::to_string(state.num_modes()) + " modes, bath has " +
                             std::to_string(bath.size()));
}

// Pairwise scalars shared by energy and gradient. Matrices are N x N, row-major.
struct PairSums {
    std::size_t n;
    std::vector<double> kp;       // exp(-1/2 sum (f_n + f_m)^2)
    std::vector<double> km;       // exp(-1/2 sum (f_n - f_m)^2)
    std::vector<double> bath_part; // sum_k 2 w_k f_n f_m - g_k (f_n + f_m)
};

PairSums pair_sums(const VariationalState& state, const DiscretizedBath& bath)
{
    const std::size_t n = state.num_polarons();
    const std::size_t m_modes = state.num_modes();
    PairSums p{n, std::vector<double>(n * n), std::vector<double>(n * n), std::vector<double>(n * n)};
    for (std::size_t a = 0; a < n; ++a) {
        const auto fa = state.row(a);
        for (std::size_t b = a; b < n; ++b) {
            const auto fb = state.row(b);
            double plus = 0.0, minus = 0.0, bath_sum = 0.0;
            for (std::size_t k = 0; k < m_modes; ++k) {
                const double s = fa[k] + fb[k];
                const double d = fa[k] - fb[k];
                plus += s * s;
                minus += d * d;
                bath_sum += 2.0 * bath[k].omega * fa[k] * fb[k] - bath[k].g * s;
            }
            const double kp = kernel_from_exponent(-0.5 * plus);
            const double km = kernel_from_exponent(-0.5 * minus);
            p.kp[a * n + b] = p.kp[b * n + a] = kp;
            p.km[a * n + b] = p.km[b * n + a] = km;
            p.bath_part[a * n + b] = p.bath_part[b * n + a] = bath_sum;
        }
    }
    return p;
}

} // namespace

void validate(const ModelParams& params)
{
    if (!(params.delta >= 0.0) || !std::isfinite(params.delta))
        throw ParameterError("model: delta must be non-negative");
}

VariationalState::VariationalState(std::vector<double> weights, std::vector<double> displacements,
                                   std::size_t num_modes)
    : weights_(std::move(weights)), displacements_(std::move(displacements)), num_modes_(num_modes)
{
    if (weights_.empty()) throw ParameterError("state: at least one polaron required");
    if (num_modes_ == 0) throw ParameterError("state: at least one mode required");
    if (displacements_.size() != weights_.size() * num_modes_)
        throw DimensionError("state: displacement matrix is not N x M");
}

VariationalState VariationalState::vacuum(std::size_t num_modes)
{
    return VariationalState({1.0}, std::vector<double>(num_modes, 0.0), num_modes);
}

VariationalState VariationalState::single(std::span<const double> displacements)
{
    return VariationalState({1.0}, std::vector<double>(displacements.begin(), displacements.end()),
                            displacements.size());
}

void VariationalState::append(double weight, std::span<const double> displacements)
{
    if (displacements.size() != num_modes_) throw DimensionError("state: appended row has wrong length");
    weights_.push_back(weight);
    displacements_.insert(displacements_.end(), displacements.begin(), displacements.end());
}

void VariationalState::erase(std::size_t n)
{
    if (n >= weights_.size()) throw DimensionError("state: row index out of range");
    if (weights_.size() == 1) throw ParameterError("state: cannot remove the last polaron");
    weights_.erase(weights_.begin() + static_cast<std::ptrdiff_t>(n));
    const auto first = displacements_.begin() + static_cast<std::ptrdiff_t>(n * num_modes_);
    displacements_.erase(first, first + static_cast<std::ptrdiff_t>(num_modes_));
}

void VariationalState::normalize()
{
    double norm = 0.0;
    for (std::size_t a = 0; a < num_polarons(); ++a)
        for (std::size_t b = 0; b < num_polarons(); ++b)
            norm += 2.0 * weights_[a] * weights_[b] * overlap(row(a), row(b));
    if (!(norm > kMinNorm)) throw DegenerateStateError("state: norm vanishes, cannot normalize");
    double scale = 1.0 / std::sqrt(norm);
    if (weights_.front() < 0.0) scale = -scale;
    for (double& c : weights_) c *= scale;
}

std::string VariationalState::to_json() const
{
    nlohmann::json j;
    j["C"] = weights_;
    auto& rows = j["f"] = nlohmann::json::array();
    for (std::size_t n = 0; n < num_polarons(); ++n) {
        const auto r = row(n);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return j.dump();
}

VariationalState VariationalState::from_json(const std::string& text)
{
    try {
        const auto j = nlohmann::json::parse(text);
        auto weights = j.at("C").get<std::vector<double>>();
        const auto rows = j.at("f").get<std::vector<std::vector<double>>>();
        if (rows.size() != weights.size()) throw FormatError("state json: C and f disagree on N");
        if (rows.empty()) throw FormatError("state json: empty state");
        const std::size_t m = rows.front().size();
        std::vector<double> flat;
        flat.reserve(rows.size() * m);
        for (const auto& r : rows) {
            if (r.size() != m) throw FormatError("state json: ragged displacement matrix");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return VariationalState(std::move(weights), std::move(flat), m);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("state json: ") + e.what());
    }
}

double kernel_from_exponent(double exponent)
{
    return exponent < kMinExponent ? 0.0 : std::exp(exponent);
}

double overlap(std::span<const double> f, std::span<const double> g)
{
    if (f.size() != g.size()) throw DimensionError("overlap: length mismatch");
    double sum = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double d = f[k] - g[k];
        sum += d * d;
    }
    return kernel_from_exponent(-0.5 * sum);
}

double plus_kernel(std::span<const double> f, std::span<const double> g)
{
    if (f.size() != g.size()) throw DimensionError("plus_kernel: length mismatch");
    double sum = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double s = f[k] + g[k];
        sum += s * s;
    }
    return kernel_from_exponent(-0.5 * sum);
}

EnergyTerms energy_terms(const VariationalState& state, const DiscretizedBath& bath, const ModelParams& params)
{
    require_match(state, bath);
    validate(params);
    const std::size_t n = state.num_polarons();
    const std::size_t m_modes = state.num_modes();
    EnergyTerms t{0.0, 0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < n; ++a) {
        const auto fa = state.row(a);
        for (std::size_t b = 0; b < n; ++b) {
            const auto fb = state.row(b);
            const double cc = state.weight(a) * state.weight(b);
            double osc = 0.0, coup = 0.0;
            for (std::size_t k = 0; k < m_modes; ++k) {
                osc += 2.0 * bath[k].omega * fa[k] * fb[k];
                coup += bath[k].g * (fa[k] + fb[k]);
            }
            const double km = overlap(fa, fb);
            t.tunneling -= params.delta * cc * plus_kernel(fa, fb);
            t.oscillator += cc * km * osc;
            t.coupling -= cc * km * coup;
            t.norm += 2.0 * cc * km;
        }
    }
    return t;
}

double energy(const VariationalState& state, const DiscretizedBath& bath, const ModelParams& params)
{
    const EnergyTerms t = energy_terms(state, bath, params);
    if (!(t.norm >= kMinNorm)) throw DegenerateStateError("energy: <Psi|Psi> below 1e-12");
    return t.numerator() / t.norm;
}

double Gradient::max_abs() const
{
    double m = 0.0;
    for (double v : weights) m = std::max(m, std::abs(v));
    for (double v : displacements) m = std::max(m, std::abs(v));
    return m;
}

Gradient gradient(const VariationalState& state, const DiscretizedBath& bath, const ModelParams& params)
{
    require_match(state, bath);
    validate(params);
    const std::size_t n = state.num_polarons();
    const std::size_t m_modes = state.num_modes();
    const PairSums p = pair_sums(state, bath);
    const auto c = state.weights();

    double numer = 0.0, norm = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t ab = a * n + b;
            numer += c[a] * c[b] * (-params.delta * p.kp[ab] + p.km[ab] * p.bath_part[ab]);
            norm += 2.0 * c[a] * c[b] * p.km[ab];
        }
    if (!(norm >= kMinNorm)) throw DegenerateStateError("gradient: <Psi|Psi> below 1e-12");
    const double e = numer / norm;

    Gradient g{std::vector<double>(n, 0.0), std::vector<double>(n * m_modes, 0.0), e};
    for (std::size_t a = 0; a < n; ++a) {
        double sum = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t ab = a * n + b;
            const double h = -params.delta * p.kp[ab] + p.km[ab] * p.bath_part[ab];
            sum += c[b] * (h - e * 2.0 * p.km[ab]);
        }
        g.weights[a] = 2.0 * sum / norm;
    }

    // d/df_ak of a symmetric pair sum is 2 C_a sum_b C_b (first-slot derivative).
    for (std::size_t a = 0; a < n; ++a) {
        const auto fa = state.row(a);
        auto out = std::span<double>(g.displacements).subspan(a * m_modes, m_modes);
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t ab = a * n + b;
            const auto fb = state.row(b);
            const double cb = c[b];
            const double kp = p.kp[ab];
            const double km = p.km[ab];
            const double bp = p.bath_part[ab];
            for (std::size_t k = 0; k < m_modes; ++k) {
                const double diff = fa[k] - fb[k];
                const double tunnel = params.delta * (fa[k] + fb[k]) * kp;
                const double bath_term = km * (-diff * bp + 2.0 * bath[k].omega * fb[k] - bath[k].g);
                const double norm_term = 2.0 * e * diff * km;
                out[k] += cb * (tunnel + bath_term + norm_term);
            }
        }
        const double scale = 2.0 * c[a] / norm;
        for (double& v : out) v *= scale;
    }
    return g;
}

double silbey_harris_energy(std::span<const double> f, const DiscretizedBath& bath, const ModelParams& params)
{
    if (f.size() != bath.size()) throw DimensionError("silbey_harris_energy: length mismatch");
    double sq = 0.0, osc = 0.0, coup = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        sq += f[k] * f[k];
        osc += bath[k].omega * f[k] * f[k];
        coup += bath[k].g * f[k];
    }
    return -0.5 * params.delta * std::exp(-2.0 * sq) + osc - coup;
}

SilbeyHarris sh_solve(const DiscretizedBath& bath, const ModelParams& params)
{
    validate(params);
    constexpr std::size_t kMaxIterations = 100000;
    constexpr double kRelTol = 1e-12;

    auto exponent = [&](double delta_r) {
        double sum = 0.0;
        for (const Mode& m : bath.modes()) {
            const double f = 0.5 * m.g / (m.omega + delta_r);
            sum += f * f;
        }
        return -2.0 * sum;
    };

    double delta_r = params.delta;
    std::size_t it = 0;
    bool converged = false;
    while (it < kMaxIterations) {
        ++it;
        const double next = params.delta * std::exp(exponent(delta_r));
        const double change = std::abs(next - delta_r);
        delta_r = next;
        if (change <= kRelTol * delta_r) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("sh_solve: no fixed point after 1e5 iterations", delta_r);

    SilbeyHarris out{std::vector<double>(bath.size()), delta_r, it};
    for (std::size_t k = 0; k < bath.size(); ++k)
        out.displacements[k] = 0.5 * bath[k].g / (bath[k].omega + delta_r);
    return out;
}

} // namespace polaron
