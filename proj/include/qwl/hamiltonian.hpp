#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qwl/types.hpp"

namespace qwl {

// Periodic transverse-field Ising chain,
//
//   H = J * sum_{i=1..N} sz_i sz_{i+1}  +  h * sum_{i=1..N} sx_i,
//
// with sz_{N+1} = sz_1 and the convention sz|0> = +|0>. The sum is taken
// literally, so the N=2 chain counts its single bond twice and N=1 picks up
// a constant J from the wrap term. H is real symmetric and traceless.
struct HamiltonianSpec {
    int n_spins = 1;
    double coupling = 0.0;  // J
    double field = 0.0;     // h
    void validate() const;
};

// Dense construction/diagonalization is intended for desk scales only.
inline constexpr int kMaxDenseSpins = 13;

struct Spectrum {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // column i pairs with eigenvalues[i]; 0x0 when skipped
    int n_states() const { return static_cast<int>(eigenvalues.size()); }
    bool has_eigenvectors() const { return eigenvectors.size() > 0; }
};

Eigen::MatrixXd build_tfim(const HamiltonianSpec& spec);

Spectrum diagonalize(const Eigen::MatrixXd& hamiltonian, bool with_eigenvectors = true);

// Loose spectral bound [-N(|J|+|h|), +N(|J|+|h|)]; every eigenvalue lies
// strictly inside for h != 0.
EnergyWindow energy_window(const HamiltonianSpec& spec);

// Exact ensemble averages from the full spectrum, log-sum-exp shifted so
// beta up to ~1e3 at |E| up to ~1e2 stays overflow-free.
ThermoCurves exact_thermo(const Spectrum& spectrum, const std::vector<double>& beta_grid);

// Exact per-bin eigenvalue counts; the reference for Wang-Landau output.
std::vector<std::int64_t> brute_force_dos(const Spectrum& spectrum, const BinSpec& bins);

// Text fixture: header "# N J h", then one ascending eigenvalue per line at
// 15 significant digits.
void write_spectrum_fixture(const std::string& path, const HamiltonianSpec& spec,
                            const Spectrum& spectrum);

}  // namespace qwl
