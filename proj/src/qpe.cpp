#include "qwl/qpe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qwl {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};

int spins_of(const Spectrum& spectrum) {
    const int n_states = spectrum.n_states();
    if (n_states < 2 || (n_states & (n_states - 1)) != 0)
        throw std::invalid_argument("spectrum size is not a power of two");
    int n = 0;
    while ((1 << (n + 1)) <= n_states) ++n;
    return n;
}

// Draws from a CDF stored as inclusive partial sums.
std::uint64_t draw_cdf(const std::vector<double>& cdf, Rng& rng) {
    const double u = rng.uniform() * cdf.back();
    std::size_t lo = 0, hi = cdf.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (u < cdf[mid])
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}
}  // namespace

const char* tier_name(QpeTier tier) {
    switch (tier) {
        case QpeTier::pair_statevector: return "pair_statevector";
        case QpeTier::eigen_statevector: return "eigen_statevector";
        case QpeTier::analytic: return "analytic";
    }
    throw std::invalid_argument("unknown tier");
}

std::optional<QpeTier> parse_tier(const std::string& name) {
    if (name == "pair_statevector") return QpeTier::pair_statevector;
    if (name == "eigen_statevector") return QpeTier::eigen_statevector;
    if (name == "analytic") return QpeTier::analytic;
    return std::nullopt;
}

void QpeConfig::validate() const {
    if (k < 1) throw std::invalid_argument("qpe.k must be at least 1");
    if (k > 24) throw std::invalid_argument("qpe.k above 24 is not supported");
    if (!(window.width() > 0.0))
        throw std::invalid_argument("qpe window must have positive width");
}

double QpeConfig::evolution_time() const {
    validate();
    const double scale = 1.0 - std::ldexp(1.0, -k);  // 1 - 2^-k
    return 2.0 * std::numbers::pi * scale / window.width();
}

double phase_of_energy(double energy, const QpeConfig& cfg) {
    cfg.validate();
    const double tol = 1e-12 * std::max(1.0, cfg.window.width());
    if (energy < cfg.window.e_lo - tol || energy > cfg.window.e_hi + tol)
        throw std::domain_error("phase_of_energy: energy outside the window");
    const double scale = 1.0 - std::ldexp(1.0, -cfg.k);
    const double phi = (energy - cfg.window.e_lo) * scale / cfg.window.width();
    return std::clamp(phi, 0.0, scale);
}

double energy_of_outcome(std::uint64_t m, const QpeConfig& cfg) {
    cfg.validate();
    if (m >= cfg.n_outcomes())
        throw std::domain_error("energy_of_outcome: outcome exceeds k bits");
    const double denom = static_cast<double>(cfg.n_outcomes() - 1);  // 2^k - 1
    return cfg.window.e_lo + static_cast<double>(m) * cfg.window.width() / denom;
}

std::vector<double> analytic_outcome_distribution(double phase, int k) {
    if (k < 1 || k > 24) throw std::invalid_argument("analytic_outcome_distribution: bad k");
    if (!(phase >= 0.0) || phase >= 1.0)
        throw std::domain_error("analytic_outcome_distribution: phase must lie in [0, 1)");
    const std::uint64_t n = std::uint64_t{1} << k;
    const double nd = static_cast<double>(n);
    std::vector<double> p(n);
    for (std::uint64_t m = 0; m < n; ++m) {
        const double d = phase - static_cast<double>(m) / nd;
        const double s = std::sin(std::numbers::pi * d);
        if (s == 0.0) {
            p[m] = 1.0;  // representable phase: the limit of the ratio
        } else {
            const double r = std::sin(nd * std::numbers::pi * d) / (nd * s);
            p[m] = r * r;
        }
    }
    return p;
}

EnergySampler::EnergySampler(const Spectrum& spectrum, QpeConfig cfg)
    : spectrum_(&spectrum), cfg_(std::move(cfg)) {
    cfg_.validate();
    n_spins_ = spins_of(spectrum);
    const int n_states = spectrum.n_states();
    const double e_min = spectrum.eigenvalues[0];
    const double e_max = spectrum.eigenvalues[n_states - 1];
    if (!cfg_.window.contains(e_min) || !cfg_.window.contains(e_max))
        throw std::invalid_argument("qpe window does not contain the spectrum");

    switch (cfg_.tier) {
        case QpeTier::pair_statevector: {
            if (2 * n_spins_ + cfg_.k > kMaxQubits)
                throw std::invalid_argument(
                    "pair_statevector tier requires 2*n_spins + k <= " +
                    std::to_string(kMaxQubits) + " qubits (got " +
                    std::to_string(2 * n_spins_ + cfg_.k) + ")");
            if (!spectrum.has_eigenvectors())
                throw std::invalid_argument("pair_statevector tier needs eigenvectors");
            // U = V exp(i (E - e_lo) t) V^T, then repeated squaring for the
            // controlled powers U^(2^j).
            const double t = cfg_.evolution_time();
            Eigen::VectorXcd d(n_states);
            for (int i = 0; i < n_states; ++i)
                d[i] = std::exp(kI * ((spectrum.eigenvalues[i] - cfg_.window.e_lo) * t));
            const Eigen::MatrixXcd v = spectrum.eigenvectors.cast<std::complex<double>>();
            unitary_powers_.reserve(cfg_.k);
            unitary_powers_.push_back(v * d.asDiagonal() * v.adjoint());
            for (int j = 1; j < cfg_.k; ++j)
                unitary_powers_.push_back(unitary_powers_.back() * unitary_powers_.back());
            break;
        }
        case QpeTier::eigen_statevector: {
            if (n_spins_ + cfg_.k > kMaxQubits)
                throw std::invalid_argument(
                    "eigen_statevector tier requires n_spins + k <= " +
                    std::to_string(kMaxQubits) + " qubits (got " +
                    std::to_string(n_spins_ + cfg_.k) + ")");
            const double t = cfg_.evolution_time();
            Eigen::VectorXcd d(n_states);
            for (int i = 0; i < n_states; ++i)
                d[i] = std::exp(kI * ((spectrum.eigenvalues[i] - cfg_.window.e_lo) * t));
            diagonal_powers_.reserve(cfg_.k);
            diagonal_powers_.push_back(d);
            for (int j = 1; j < cfg_.k; ++j)
                diagonal_powers_.push_back(
                    diagonal_powers_.back().cwiseProduct(diagonal_powers_.back()));
            break;
        }
        case QpeTier::analytic: {
            outcome_cdf_.reserve(n_states);
            for (int i = 0; i < n_states; ++i) {
                const double phi = phase_of_energy(spectrum.eigenvalues[i], cfg_);
                std::vector<double> p = analytic_outcome_distribution(phi, cfg_.k);
                double acc = 0.0;
                for (auto& v : p) {
                    acc += v;
                    v = acc;  // inclusive partial sums
                }
                outcome_cdf_.push_back(std::move(p));
            }
            break;
        }
    }
}

QpeSample EnergySampler::sample(Rng& rng) const {
    switch (cfg_.tier) {
        case QpeTier::pair_statevector: return sample_pair(rng);
        case QpeTier::eigen_statevector: return sample_eigen(rng);
        case QpeTier::analytic: return sample_analytic(rng);
    }
    throw std::logic_error("unreachable");
}

QpeSample EnergySampler::sample_analytic(Rng& rng) const {
    const int i = static_cast<int>(rng.uniform_index(spectrum_->n_states()));
    const std::uint64_t m = draw_cdf(outcome_cdf_[i], rng);
    return {m, energy_of_outcome(m, cfg_), i};
}

QpeSample EnergySampler::sample_eigen(Rng& rng) const {
    const int i = static_cast<int>(rng.uniform_index(spectrum_->n_states()));
    // The system register works in the energy eigenbasis, where the loaded
    // eigenstate is the basis state |i> and the cached evolution powers are
    // diagonal; phase-register statistics are identical in any system frame.
    StateVector sv = StateVector::zero(
        RegisterLayout({{"system", n_spins_}, {"phase", cfg_.k}}));
    const int phase = 1;
    auto& amps = sv.amplitudes();
    const std::uint64_t d = std::uint64_t{1} << n_spins_;
    const std::uint64_t span = cfg_.n_outcomes();
    const double amp0 = std::pow(0.5, 0.5 * cfg_.k);
    // Eigenstate load followed by Hadamards on the phase register, written
    // directly: amplitude amp0 on |i>|j> for every j.
    amps[0] = {0.0, 0.0};
    for (std::uint64_t j = 0; j < span; ++j)
        amps[(j << n_spins_) | std::uint64_t(i)] = {amp0, 0.0};
    // The controlled powers U^(2^p), one per set phase bit of j, compose to
    // the diagonal d_s^j on |s>|j>; applied blockwise, stepping the running
    // per-eigenstate phase by one power of d_s per phase value.
    const Eigen::VectorXcd& base = diagonal_powers_[0];
    Eigen::VectorXcd running = Eigen::VectorXcd::Ones(base.size());
    for (std::uint64_t j = 0; j < span; ++j) {
        std::complex<double>* block = amps.data() + (j << n_spins_);
        for (std::uint64_t s = 0; s < d; ++s) block[s] *= running[s];
        running.array() *= base.array();
    }
    sv.apply_inverse_qft(phase);
    const std::uint64_t m = sv.measure_register(phase, rng);
    return {m, energy_of_outcome(m, cfg_), i};
}

QpeSample EnergySampler::sample_pair(Rng& rng) const {
    const int n = n_spins_;
    StateVector sv = StateVector::zero(
        RegisterLayout({{"system", n}, {"copy", n}, {"phase", cfg_.k}}));
    const int sys = 0, copy = 1, phase = 2;
    sv.prepare_max_entangled(sys, copy);
    for (int j = 0; j < cfg_.k; ++j) sv.hadamard(sv.layout().qubit(phase, j));
    for (int j = 0; j < cfg_.k; ++j)
        sv.apply_controlled_unitary(sv.layout().qubit(phase, j), sys, unitary_powers_[j]);
    sv.apply_inverse_qft(phase);
    const std::uint64_t m = sv.measure_register(phase, rng);

    // Collapse bookkeeping: measure the system register in the eigenbasis.
    // After the phase outcome the joint amplitudes A[s, c] give eigenstate
    // weights |(V^T A)[i, :]|^2 because the copy register keeps the
    // eigenbranches orthogonal.
    const std::uint64_t d = std::uint64_t{1} << n;
    Eigen::MatrixXcd a(d, d);
    const auto& amps = sv.amplitudes();
    const std::uint64_t phase_base = m << (2 * n);
    for (std::uint64_t c = 0; c < d; ++c)
        for (std::uint64_t s = 0; s < d; ++s) a(s, c) = amps[phase_base | s | (c << n)];
    const Eigen::MatrixXcd b = spectrum_->eigenvectors.transpose().cast<std::complex<double>>() * a;
    std::vector<double> cdf(d);
    double acc = 0.0;
    for (std::uint64_t i = 0; i < d; ++i) {
        acc += b.row(i).squaredNorm();
        cdf[i] = acc;
    }
    const int i = static_cast<int>(draw_cdf(cdf, rng));
    return {m, energy_of_outcome(m, cfg_), i};
}

QpeSample sample_energy(const Spectrum& spectrum, const QpeConfig& cfg, Rng& rng) {
    return EnergySampler(spectrum, cfg).sample(rng);
}

}  // namespace qwl
