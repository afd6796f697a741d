#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "errors.hpp"
#include "quadrature.hpp"

namespace polaron {

namespace {

// Boson occupations and diagonal energies of the truncated product basis.
class FockBasis {
public:
    FockBasis(const std::vector<Mode>& modes, std::size_t cutoff) : modes_(modes), cutoff_(cutoff)
    {
        const std::size_t m = modes.size();
        strides_.assign(m, 1);
        for (std::size_t k = m; k-- > 1;) strides_[k - 1] = strides_[k] * (cutoff + 1);
        bosons_ = strides_.empty() ? 1 : strides_[0] * (cutoff + 1);
        occ_.resize(bosons_ * m);
        diag_.resize(bosons_);
        for (std::size_t b = 0; b < bosons_; ++b) {
            std::size_t rest = b;
            double e = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                const std::size_t n = rest / strides_[k];
                rest %= strides_[k];
                occ_[b * m + k] = static_cast<std::uint8_t>(n);
                e += modes[k].omega * static_cast<double>(n);
            }
            diag_[b] = e;
        }
    }

    std::size_t bosons() const { return bosons_; }
    std::size_t dimension() const { return 2 * bosons_; }
    std::size_t occupation(std::size_t b, std::size_t k) const { return occ_[b * modes_.size() + k]; }
    std::size_t stride(std::size_t k) const { return strides_[k]; }
    std::size_t cutoff() const { return cutoff_; }

    // y = H x with H = Delta/2 sx - sz sum g_k/2 (a_k + a_k^dag) + sum w_k n_k.
    void apply(double delta, const std::vector<double>& x, std::vector<double>& y) const
    {
        const std::size_t m = modes_.size();
        for (std::size_t s = 0; s < 2; ++s) {
            const double sz = s == 0 ? 1.0 : -1.0;
            const std::size_t off = s * bosons_;
            const std::size_t flip = (1 - s) * bosons_;
            for (std::size_t b = 0; b < bosons_; ++b) {
                const std::size_t i = off + b;
                double acc = diag_[b] * x[i] + 0.5 * delta * x[flip + b];
                for (std::size_t k = 0; k < m; ++k) {
                    const std::size_t n = occ_[b * m + k];
                    const double c = -0.5 * sz * modes_[k].g;
                    if (n > 0) acc += c * std::sqrt(static_cast<double>(n)) * x[i - strides_[k]];
                    if (n < cutoff_) acc += c * std::sqrt(static_cast<double>(n + 1)) * x[i + strides_[k]];
                }
                y[i] = acc;
            }
        }
    }

private:
    std::vector<Mode> modes_;
    std::size_t cutoff_;
    std::vector<std::size_t> strides_;
    std::size_t bosons_ = 1;
    std::vector<std::uint8_t> occ_;
    std::vector<double> diag_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y)
{
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

struct Eigenpair {
    double value;
    std::vector<double> vector;
    double residual;
    std::size_t matvecs;
};

Eigenpair lowest_eigenpair(const FockBasis& basis, double delta)
{
    constexpr double kResidualTol = 1e-10;
    constexpr std::size_t kMaxRestarts = 400;
    const std::size_t dim = basis.dimension();
    // Krylov block limited to ~400 MB of basis vectors.
    const std::size_t krylov =
        std::clamp<std::size_t>(50'000'000 / dim, std::min<std::size_t>(20, dim), std::min<std::size_t>(150, dim));

    // Start near (|up> - |down>) (x) |0> with a deterministic perturbation.
    std::vector<double> v(dim);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& x : v) x = 1e-3 * u(rng);
    v[0] += 1.0;
    v[basis.bosons()] -= 1.0;
    double nv = std::sqrt(dot(v, v));
    for (double& x : v) x /= nv;

    std::vector<std::vector<double>> krylov_basis;
    std::vector<double> w(dim);
    std::size_t matvecs = 0;
    Eigenpair best{0.0, v, std::numeric_limits<double>::infinity(), 0};

    for (std::size_t restart = 0; restart < kMaxRestarts; ++restart) {
        krylov_basis.clear();
        krylov_basis.push_back(v);
        std::vector<double> alpha, beta;
        for (std::size_t j = 0; j < krylov; ++j) {
            basis.apply(delta, krylov_basis[j], w);
            ++matvecs;
            const double a = dot(krylov_basis[j], w);
            alpha.push_back(a);
            // Full reorthogonalization, applied twice.
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& q : krylov_basis) axpy(-dot(q, w), q, w);
            const double b = std::sqrt(dot(w, w));
            if (j + 1 == krylov || b < 1e-13) break;
            beta.push_back(b);
            for (double& x : w) x /= b;
            krylov_basis.push_back(w);
        }
        const std::size_t k = alpha.size();
        Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(k));
        Eigen::VectorXd e(static_cast<Eigen::Index>(k > 0 ? k - 1 : 0));
        for (std::size_t i = 0; i + 1 < k; ++i) e[static_cast<Eigen::Index>(i)] = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
        const Eigen::VectorXd y = tri.eigenvectors().col(0);

        std::fill(v.begin(), v.end(), 0.0);
        for (std::size_t i = 0; i < k; ++i) axpy(y[static_cast<Eigen::Index>(i)], krylov_basis[i], v);
        nv = std::sqrt(dot(v, v));
        for (double& x : v) x /= nv;

        basis.apply(delta, v, w);
        ++matvecs;
        const double theta = dot(v, w);
        axpy(-theta, v, w);
        const double res = std::sqrt(dot(w, w));
        best = {theta, v, res, matvecs};
        if (res < kResidualTol) return best;
    }
    throw ConvergenceError("ed_ground: Lanczos did not converge (residual " + std::to_string(best.residual) + ")",
                           best.value);
}

double log_factorial_ratio(std::size_t n, std::size_t m) // log(n!/m!) for n >= m
{
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(m) + 1.0);
}

} // namespace

std::size_t ed_dimension(std::size_t num_modes, std::size_t fock_cutoff)
{
    double d = 2.0;
    for (std::size_t k = 0; k < num_modes; ++k) d *= static_cast<double>(fock_cutoff + 1);
    return d > 1e18 ? std::numeric_limits<std::size_t>::max() : static_cast<std::size_t>(d);
}

void validate(const EDProblem& p)
{
    if (p.modes.empty() || p.modes.size() > 4) throw ParameterError("ed: need 1 to 4 modes");
    if (p.fock_cutoff < 8) throw ParameterError("ed: fock_cutoff must be at least 8");
    if (p.fock_cutoff > 255) throw ParameterError("ed: fock_cutoff above 255 not supported");
    if (ed_dimension(p.modes.size(), p.fock_cutoff) > kMaxEdDimension)
        throw DimensionError("ed: Hilbert dimension " + std::to_string(ed_dimension(p.modes.size(), p.fock_cutoff)) +
                             " exceeds 2e6");
    if (!(p.delta >= 0.0) || !std::isfinite(p.delta)) throw ParameterError("ed: delta must be non-negative");
    for (const Mode& m : p.modes) {
        if (!(m.omega > 0.0)) throw ParameterError("ed: mode frequencies must be positive");
        if (!(m.g >= 0.0)) throw ParameterError("ed: couplings must be non-negative");
    }
}

EDResult ed_ground(const EDProblem& problem)
{
    validate(problem);
    const FockBasis basis(problem.modes, problem.fock_cutoff);
    Eigenpair gs = lowest_eigenpair(basis, problem.delta);

    EDResult r;
    r.energy = gs.value;
    r.residual = gs.residual;
    r.iterations = gs.matvecs;
    r.dimension = basis.dimension();
    const std::size_t nb = basis.bosons();
    double sx = 0.0;
    for (std::size_t b = 0; b < nb; ++b) sx += 2.0 * gs.vector[b] * gs.vector[nb + b];
    r.coherence = sx;

    std::size_t check = problem.fock_cutoff + 4;
    if (ed_dimension(problem.modes.size(), check) > kMaxEdDimension) check = problem.fock_cutoff - 4;
    const FockBasis other(problem.modes, check);
    r.check_cutoff = check;
    r.cutoff_shift = lowest_eigenpair(other, problem.delta).value - gs.value;
    r.cutoff_converged = std::abs(r.cutoff_shift) < 1e-8;
    r.ground_state = std::move(gs.vector);
    return r;
}

MomentTable ed_moments(const EDProblem& problem, const std::vector<double>& psi, std::size_t mode,
                       std::size_t m_max, MomentChannel channel)
{
    validate(problem);
    if (mode >= problem.modes.size()) throw DimensionError("ed_moments: mode index out of range");
    if (m_max < 1) throw ParameterError("ed_moments: m_max must be at least 1");
    const FockBasis basis(problem.modes, problem.fock_cutoff);
    if (psi.size() != basis.dimension()) throw DimensionError("ed_moments: state has wrong dimension");

    const std::size_t nb = basis.bosons();
    const std::size_t cutoff = basis.cutoff();
    const std::size_t stride = basis.stride(mode);
    const double norm = dot(psi, psi);
    MomentTable table{channel, m_max, std::vector<double>(m_max * m_max, 0.0)};
    std::vector<double> o(psi.size());

    for (std::size_t m = 0; m < m_max; ++m)
        for (std::size_t mp = 0; mp < m_max; ++mp) {
            // o = [a^dag]^m a^mp psi
            std::fill(o.begin(), o.end(), 0.0);
            for (std::size_t s = 0; s < 2; ++s)
                for (std::size_t b = 0; b < nb; ++b) {
                    const std::size_t n = basis.occupation(b, mode);
                    if (n < mp) continue;
                    const std::size_t mid = n - mp;
                    const std::size_t out = mid + m;
                    if (out > cutoff) continue;
                    const double amp =
                        std::exp(0.5 * (log_factorial_ratio(n, mid) + log_factorial_ratio(out, mid)));
                    const std::size_t i = s * nb + b;
                    const std::size_t j = s * nb + b - n * stride + out * stride;
                    o[j] += amp * psi[i];
                }
            double v = 0.0;
            for (std::size_t b = 0; b < nb; ++b) {
                const double up_up = psi[b] * o[b];
                const double dn_dn = psi[nb + b] * o[nb + b];
                const double dn_up = psi[nb + b] * o[b];
                const double up_dn = psi[b] * o[nb + b];
                switch (channel) {
                case MomentChannel::identity: v += up_up + dn_dn; break;
                case MomentChannel::sigma_z: v += up_up - dn_dn; break;
                case MomentChannel::up: v += up_up; break;
                case MomentChannel::sigma_x: v += dn_up + up_dn; break;
                case MomentChannel::sigma_y: v += dn_up - up_dn; break;
                }
            }
            table(m, mp) = v / norm;
        }
    return table;
}

double ToulouseParams::bandwidth() const
{
    return 4.0 * omega_c / std::numbers::pi;
}

double toulouse_coherence_zero_temperature(double delta, double omega_c)
{
    const ToulouseParams p{delta, omega_c, 0.0};
    const double tk2 = p.kondo_scale() * p.kondo_scale();
    const double d2 = p.bandwidth() * p.bandwidth();
    return delta / omega_c * (0.5 * std::log1p(d2 / tk2) + tk2 / (d2 + tk2) - 1.0);
}

double toulouse_coherence(const ToulouseParams& p)
{
    if (!(p.delta > 0.0)) throw ParameterError("toulouse: delta must be positive");
    if (!(p.omega_c > 0.0)) throw ParameterError("toulouse: omega_c must be positive");
    if (!(p.temperature >= 0.0)) throw DomainError("toulouse: temperature must be non-negative");
    if (p.temperature == 0.0) return toulouse_coherence_zero_temperature(p.delta, p.omega_c);

    const double t = p.temperature;
    const double tk = p.kondo_scale();
    const double tk2 = tk * tk;
    const double d = p.bandwidth();
    const double pref = 4.0 * p.delta / (std::numbers::pi * d);

    // T log(1 + e^{-e/T}) evaluated as a softplus.
    auto integrand = [=](double e) {
        const double z = -e / t;
        const double softplus = std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
        const double den = e * e + tk2;
        return t * softplus * (e * e - tk2) / (den * den);
    };

    std::vector<double> cuts{-d, 0.0, d};
    for (double scale = tk; scale < d; scale *= 10.0) {
        cuts.push_back(scale);
        cuts.push_back(-scale);
    }
    for (double mult : {1.0, 10.0, 40.0}) {
        if (mult * t < d) {
            cuts.push_back(mult * t);
            cuts.push_back(-mult * t);
        }
    }
    constexpr double kAbsTol = 1e-10;
    const quad::Result r = quad::integrate(integrand, cuts, kAbsTol / pref);
    if (!r.converged)
        throw ConvergenceError("toulouse: quadrature missed tolerance (estimate " + std::to_string(pref * r.value) +
                                   ", error " + std::to_string(pref * r.error) + ")",
                               pref * r.value);
    return pref * r.value;
}

double onepolaron_thermal(double delta_r, double delta, double temperature)
{
    if (!(delta > 0.0)) throw ParameterError("onepolaron_thermal: delta must be positive");
    if (!(delta_r >= 0.0)) throw ParameterError("onepolaron_thermal: delta_r must be non-negative");
    if (!(temperature >= 0.0)) throw DomainError("onepolaron_thermal: temperature must be non-negative");
    if (temperature == 0.0) return delta_r / delta;
    return delta_r / delta * std::tanh(delta_r / (2.0 * temperature));
}

} // namespace polaron
