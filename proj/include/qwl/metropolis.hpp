#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qwl/qpe.hpp"
#include "qwl/rng.hpp"

namespace qwl {

struct MetropolisConfig {
    double beta = 1.0;
    std::uint64_t total_steps = 0;
    std::uint64_t burn_in = 0;  // must stay below total_steps
    void validate() const;
};

// u < min(1, exp(-beta * (E_proposed - E_current))), strict comparison.
bool metro_accept(double e_current, double e_proposed, double beta, double u);

// Post-burn-in record of the retained energy at every step, so the length is
// total_steps - burn_in.
struct EnergyTrace {
    double beta = 0.0;
    std::vector<double> energies;
};

struct MetropolisRun {
    EnergyTrace trace;
    std::vector<std::int32_t> eigen_indices;  // filled when requested
};

// Fixed-temperature chain over QPE energy samples: proposals are fresh
// uniform-eigenstate measurements, the current energy is the lattice-mapped
// measured value, and the starting point is one fresh draw.
MetropolisRun run_quantum_metropolis(const EnergySampler& sampler, const MetropolisConfig& cfg,
                                     Rng& rng, bool record_eigen_indices = false);
MetropolisRun run_quantum_metropolis(const Spectrum& spectrum, const QpeConfig& qpe_cfg,
                                     const MetropolisConfig& cfg, Rng& rng,
                                     bool record_eigen_indices = false);

struct EnergyMoments {
    double internal_energy = 0.0;
    double heat_capacity = 0.0;  // beta^2 * Var(E)
};

EnergyMoments moments(const EnergyTrace& trace, double beta);

// One energy per line preceded by the header "# beta seed".
void write_energy_trace(const std::string& path, const EnergyTrace& trace, std::uint64_t seed);

}  // namespace qwl
