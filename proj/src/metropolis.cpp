#include "qwl/metropolis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qwl {

void MetropolisConfig::validate() const {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("metropolis beta must be finite and >= 0");
    if (total_steps == 0) throw std::invalid_argument("metropolis total_steps must be positive");
    if (burn_in >= total_steps)
        throw std::invalid_argument("metropolis burn_in must stay below total_steps");
}

bool metro_accept(double e_current, double e_proposed, double beta, double u) {
    if (e_proposed <= e_current) return u < 1.0;
    return u < std::exp(-beta * (e_proposed - e_current));
}

MetropolisRun run_quantum_metropolis(const EnergySampler& sampler, const MetropolisConfig& cfg,
                                     Rng& rng, bool record_eigen_indices) {
    cfg.validate();
    MetropolisRun out;
    out.trace.beta = cfg.beta;
    out.trace.energies.reserve(cfg.total_steps - cfg.burn_in);
    if (record_eigen_indices) out.eigen_indices.reserve(cfg.total_steps - cfg.burn_in);

    QpeSample current = sampler.sample(rng);
    for (std::uint64_t step = 0; step < cfg.total_steps; ++step) {
        const QpeSample proposed = sampler.sample(rng);
        const double u = rng.uniform();
        if (metro_accept(current.energy, proposed.energy, cfg.beta, u)) current = proposed;
        if (step >= cfg.burn_in) {
            out.trace.energies.push_back(current.energy);
            if (record_eigen_indices)
                out.eigen_indices.push_back(current.eigen_index.value_or(-1));
        }
    }
    return out;
}

MetropolisRun run_quantum_metropolis(const Spectrum& spectrum, const QpeConfig& qpe_cfg,
                                     const MetropolisConfig& cfg, Rng& rng,
                                     bool record_eigen_indices) {
    EnergySampler sampler(spectrum, qpe_cfg);
    return run_quantum_metropolis(sampler, cfg, rng, record_eigen_indices);
}

EnergyMoments moments(const EnergyTrace& trace, double beta) {
    if (trace.energies.empty()) throw std::invalid_argument("moments: empty trace");
    double mean = 0.0;
    for (double e : trace.energies) mean += e;
    mean /= static_cast<double>(trace.energies.size());
    double var = 0.0;
    for (double e : trace.energies) var += (e - mean) * (e - mean);
    var /= static_cast<double>(trace.energies.size());
    return {mean, beta * beta * var};
}

void write_energy_trace(const std::string& path, const EnergyTrace& trace, std::uint64_t seed) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("write_energy_trace: cannot open " + path);
    char line[96];
    std::snprintf(line, sizeof line, "# %.15g %llu\n", trace.beta,
                  static_cast<unsigned long long>(seed));
    file << line;
    for (double e : trace.energies) {
        std::snprintf(line, sizeof line, "%.15g\n", e);
        file << line;
    }
    if (!file) throw std::runtime_error("write_energy_trace: write failed for " + path);
}

}  // namespace qwl
