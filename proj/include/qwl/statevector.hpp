#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qwl/rng.hpp"

namespace qwl {

inline constexpr int kMaxQubits = 26;

struct Register {
    std::string name;
    int width = 0;
};

// Registers occupy consecutive bit ranges of the global index in layout
// order, first register lowest. Qubit 0 of a register is the least
// significant bit of its label.
class RegisterLayout {
  public:
    RegisterLayout() = default;
    explicit RegisterLayout(std::vector<Register> regs);

    int total_qubits() const { return total_; }
    int n_registers() const { return static_cast<int>(regs_.size()); }
    const Register& reg(int r) const;
    int offset(int r) const;
    int find(const std::string& name) const;  // throws on unknown name
    int qubit(int r, int q) const;            // global index of register qubit q
    std::uint64_t extract(std::uint64_t index, int r) const;

  private:
    std::vector<Register> regs_;
    std::vector<int> offsets_;
    int total_ = 0;
};

class StateVector {
  public:
    static StateVector zero(RegisterLayout layout);

    const RegisterLayout& layout() const { return layout_; }
    std::uint64_t dim() const { return amps_.size(); }
    std::vector<std::complex<double>>& amplitudes() { return amps_; }
    const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
    double norm() const;

    void hadamard(int qubit);
    void cnot(int control, int target);
    void controlled_phase(int control, int target, double angle);
    void swap_qubits(int a, int b);

    // Hadamard on every qubit of reg_a, then pairwise CNOTs into reg_b:
    // produces 2^-n/2 * sum_x |x>_a |x>_b. Both registers must be all zero.
    void prepare_max_entangled(int reg_a, int reg_b);

    // U acts on target_reg amplitudes wherever the control qubit is set.
    // U must be unitary to 1e-10 and the control must lie outside the target.
    void apply_controlled_unitary(int control_qubit, int target_reg, const Eigen::MatrixXcd& u);

    // Diagonal special case (entries must have unit modulus to 1e-10).
    void apply_controlled_diagonal(int control_qubit, int target_reg,
                                   const Eigen::VectorXcd& diag);

    // Exact inverse of F[m, j] = 2^-k/2 exp(2*pi*i*m*j / 2^k) on one register.
    void apply_inverse_qft(int reg);

    std::vector<double> register_marginal(int reg) const;

    // Projective measurement of a whole register in the computational basis;
    // collapses in place and renormalizes the surviving branch.
    std::uint64_t measure_register(int reg, Rng& rng);

  private:
    RegisterLayout layout_;
    std::vector<std::complex<double>> amps_;
};

}  // namespace qwl
