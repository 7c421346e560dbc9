#include "qwl/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace qwl {

void HamiltonianSpec::validate() const {
    if (n_spins < 1) throw std::invalid_argument("model.n_spins must be at least 1");
    if (n_spins > kMaxDenseSpins)
        throw std::invalid_argument("model.n_spins = " + std::to_string(n_spins) +
                                    " exceeds the dense-diagonalization guard of " +
                                    std::to_string(kMaxDenseSpins) + " spins");
    if (!std::isfinite(coupling) || !std::isfinite(field))
        throw std::invalid_argument("model couplings must be finite");
}

Eigen::MatrixXd build_tfim(const HamiltonianSpec& spec) {
    spec.validate();
    const int n = spec.n_spins;
    const std::uint64_t dim = std::uint64_t{1} << n;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (std::uint64_t s = 0; s < dim; ++s) {
        double bonds = 0.0;
        for (int i = 0; i < n; ++i) {
            const int zi = ((s >> i) & 1) ? -1 : 1;
            const int zj = ((s >> ((i + 1) % n)) & 1) ? -1 : 1;
            bonds += zi * zj;
        }
        h(s, s) = spec.coupling * bonds;
        for (int i = 0; i < n; ++i) h(s, s ^ (std::uint64_t{1} << i)) += spec.field;
    }
    return h;
}

Spectrum diagonalize(const Eigen::MatrixXd& hamiltonian, bool with_eigenvectors) {
    if (hamiltonian.rows() != hamiltonian.cols())
        throw std::invalid_argument("diagonalize: matrix must be square");
    if (hamiltonian.rows() == 0) throw std::invalid_argument("diagonalize: matrix is empty");
    const double asym = (hamiltonian - hamiltonian.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10)
        throw std::invalid_argument("diagonalize: matrix is not symmetric (max asymmetry " +
                                    std::to_string(asym) + ")");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        hamiltonian, with_eigenvectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: eigensolver failed to converge");
    Spectrum out;
    out.eigenvalues = solver.eigenvalues();
    if (with_eigenvectors) out.eigenvectors = solver.eigenvectors();
    return out;
}

EnergyWindow energy_window(const HamiltonianSpec& spec) {
    spec.validate();
    const double bound = spec.n_spins * (std::abs(spec.coupling) + std::abs(spec.field));
    if (!(bound > 0.0))
        throw std::invalid_argument("energy_window: |J| + |h| must be positive");
    return {-bound, bound};
}

ThermoCurves exact_thermo(const Spectrum& spectrum, const std::vector<double>& beta_grid) {
    if (spectrum.n_states() == 0) throw std::invalid_argument("exact_thermo: empty spectrum");
    if (beta_grid.empty()) throw std::invalid_argument("exact_thermo: empty beta grid");
    const auto& e = spectrum.eigenvalues;
    const int n = spectrum.n_states();

    ThermoCurves out;
    out.beta = beta_grid;
    out.internal_energy.reserve(beta_grid.size());
    out.heat_capacity.reserve(beta_grid.size());
    out.entropy.reserve(beta_grid.size());
    out.free_energy.reserve(beta_grid.size());
    for (double beta : beta_grid) {
        if (!(beta >= 0.0)) throw std::invalid_argument("exact_thermo: beta must be >= 0");
        // ln Z via a shift by the dominant term, -beta * E_min.
        const double shift = -beta * e[0];
        double z = 0.0;
        for (int i = 0; i < n; ++i) z += std::exp(-beta * e[i] - shift);
        const double ln_z = shift + std::log(z);
        double u = 0.0, e2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double w = std::exp(-beta * e[i] - ln_z);
            u += w * e[i];
            e2 += w * e[i] * e[i];
        }
        const double var = std::max(0.0, e2 - u * u);
        out.internal_energy.push_back(u);
        out.heat_capacity.push_back(beta * beta * var);
        out.entropy.push_back(ln_z + beta * u);
        out.free_energy.push_back(beta > 0.0 ? -ln_z / beta
                                             : std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

std::vector<std::int64_t> brute_force_dos(const Spectrum& spectrum, const BinSpec& bins) {
    if (spectrum.n_states() == 0) throw std::invalid_argument("brute_force_dos: empty spectrum");
    std::vector<std::int64_t> counts(bins.ell, 0);
    for (int i = 0; i < spectrum.n_states(); ++i)
        counts[bin_of(spectrum.eigenvalues[i], bins)] += 1;
    return counts;
}

void write_spectrum_fixture(const std::string& path, const HamiltonianSpec& spec,
                            const Spectrum& spectrum) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("write_spectrum_fixture: cannot open " + path);
    char line[80];
    std::snprintf(line, sizeof line, "# %d %.15g %.15g\n", spec.n_spins, spec.coupling,
                  spec.field);
    file << line;
    for (int i = 0; i < spectrum.n_states(); ++i) {
        std::snprintf(line, sizeof line, "%.15g\n", spectrum.eigenvalues[i]);
        file << line;
    }
    if (!file) throw std::runtime_error("write_spectrum_fixture: write failed for " + path);
}

}  // namespace qwl
