#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qwl/hamiltonian.hpp"
#include "qwl/rng.hpp"
#include "qwl/statevector.hpp"

namespace qwl {

// Fidelity tiers for drawing energy samples. All three realize the same
// distribution: a uniformly random eigenstate measured through k-bit phase
// estimation.
//   pair_statevector  - maximally entangled pair state, dense controlled
//                       evolution on the system register (2N + k qubits)
//   eigen_statevector - uniform eigenstate load plus the same phase circuit
//                       (N + k qubits)
//   analytic          - uniform eigenstate index plus a draw from the closed
//                       form outcome distribution (no statevector)
enum class QpeTier { pair_statevector, eigen_statevector, analytic };

const char* tier_name(QpeTier tier);
std::optional<QpeTier> parse_tier(const std::string& name);

// Phase estimation of U = exp(+i (H - e_lo) t) with
//   t = 2*pi*(1 - 2^-k) / (e_hi - e_lo),
// so the eigenphase of energy E is phi = (E - e_lo)(1 - 2^-k)/(e_hi - e_lo).
// The top of the window maps to phase 1 - 2^-k and nothing wraps; outcome m
// inverts exactly to E = e_lo + m*(e_hi - e_lo)/(2^k - 1).
struct QpeConfig {
    int k = 8;
    EnergyWindow window;
    QpeTier tier = QpeTier::analytic;

    double evolution_time() const;
    std::uint64_t n_outcomes() const { return std::uint64_t{1} << k; }
    void validate() const;
};

double phase_of_energy(double energy, const QpeConfig& cfg);
double energy_of_outcome(std::uint64_t m, const QpeConfig& cfg);

// P(m) = (1/4^k) sin^2(2^k pi d_m) / sin^2(pi d_m), d_m = phase - m/2^k,
// continued to P = 1 where d_m = 0. Sums to one.
std::vector<double> analytic_outcome_distribution(double phase, int k);

struct QpeSample {
    std::uint64_t outcome = 0;
    double energy = 0.0;             // energy_of_outcome(outcome)
    std::optional<int> eigen_index;  // filled by all tiers (pair tier via
                                     // eigenbasis collapse bookkeeping)
};

// One QPE configuration with its per-tier caches: squared unitary powers for
// the pair tier, diagonal phase powers for the eigenstate tier, per-eigenstate
// outcome CDFs for the analytic tier. Caches are read-only after construction,
// so one sampler may serve any number of chains.
class EnergySampler {
  public:
    EnergySampler(const Spectrum& spectrum, QpeConfig cfg);

    QpeSample sample(Rng& rng) const;
    const QpeConfig& config() const { return cfg_; }
    int n_states() const { return spectrum_->n_states(); }
    int n_spins() const { return n_spins_; }

  private:
    QpeSample sample_pair(Rng& rng) const;
    QpeSample sample_eigen(Rng& rng) const;
    QpeSample sample_analytic(Rng& rng) const;

    const Spectrum* spectrum_;
    QpeConfig cfg_;
    int n_spins_ = 0;
    std::vector<Eigen::MatrixXcd> unitary_powers_;   // pair tier, U^(2^j)
    std::vector<Eigen::VectorXcd> diagonal_powers_;  // eigen tier, same powers in eigenbasis
    std::vector<std::vector<double>> outcome_cdf_;   // analytic tier, per eigenstate
};

// Convenience one-shot form; builds a transient sampler.
QpeSample sample_energy(const Spectrum& spectrum, const QpeConfig& cfg, Rng& rng);

}  // namespace qwl
