#include "qwl/statevector.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace qwl {

namespace {
constexpr double kUnitaryTol = 1e-10;
constexpr std::complex<double> kI{0.0, 1.0};

// Expands a compressed index by inserting `bit` at position `p`; bits below p
// stay, the rest shift up one. Gate loops run over compressed indices so only
// the amplitudes a gate actually touches are visited (the full-scan-and-test
// form costs 2-4x the memory traffic, which dominates at 2^20 amplitudes).
std::uint64_t insert_bit(std::uint64_t x, int p, std::uint64_t bit) {
    const std::uint64_t low = x & ((std::uint64_t{1} << p) - 1);
    return ((x >> p) << (p + 1)) | (bit << p) | low;
}
}  // namespace

RegisterLayout::RegisterLayout(std::vector<Register> regs) : regs_(std::move(regs)) {
    if (regs_.empty()) throw std::invalid_argument("layout needs at least one register");
    offsets_.reserve(regs_.size());
    for (const auto& r : regs_) {
        if (r.width < 1) throw std::invalid_argument("register '" + r.name + "' has zero width");
        offsets_.push_back(total_);
        total_ += r.width;
    }
    if (total_ > kMaxQubits)
        throw std::invalid_argument("layout of " + std::to_string(total_) +
                                    " qubits exceeds the " + std::to_string(kMaxQubits) +
                                    "-qubit simulator guard");
}

const Register& RegisterLayout::reg(int r) const {
    if (r < 0 || r >= n_registers()) throw std::out_of_range("register index out of range");
    return regs_[r];
}

int RegisterLayout::offset(int r) const {
    if (r < 0 || r >= n_registers()) throw std::out_of_range("register index out of range");
    return offsets_[r];
}

int RegisterLayout::find(const std::string& name) const {
    for (int r = 0; r < n_registers(); ++r)
        if (regs_[r].name == name) return r;
    throw std::invalid_argument("no register named '" + name + "'");
}

int RegisterLayout::qubit(int r, int q) const {
    if (q < 0 || q >= reg(r).width) throw std::out_of_range("qubit index out of range");
    return offsets_[r] + q;
}

std::uint64_t RegisterLayout::extract(std::uint64_t index, int r) const {
    return (index >> offset(r)) & ((std::uint64_t{1} << reg(r).width) - 1);
}

StateVector StateVector::zero(RegisterLayout layout) {
    StateVector sv;
    sv.layout_ = std::move(layout);
    sv.amps_.assign(std::uint64_t{1} << sv.layout_.total_qubits(), {0.0, 0.0});
    sv.amps_[0] = {1.0, 0.0};
    return sv;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

void StateVector::hadamard(int qubit) {
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    const double inv = 1.0 / std::numbers::sqrt2;
    const std::uint64_t pairs = dim() >> 1;
    for (std::uint64_t c = 0; c < pairs; ++c) {
        const std::uint64_t i = insert_bit(c, qubit, 0);
        const auto a = amps_[i];
        const auto b = amps_[i | bit];
        amps_[i] = (a + b) * inv;
        amps_[i | bit] = (a - b) * inv;
    }
}

void StateVector::cnot(int control, int target) {
    if (control == target) throw std::invalid_argument("cnot: control equals target");
    const std::uint64_t tbit = std::uint64_t{1} << target;
    const int p0 = std::min(control, target);
    const int p1 = std::max(control, target);
    const std::uint64_t quads = dim() >> 2;
    for (std::uint64_t c = 0; c < quads; ++c) {
        const std::uint64_t i = insert_bit(insert_bit(c, p0, p0 == control ? 1 : 0), p1,
                                           p1 == control ? 1 : 0);
        std::swap(amps_[i], amps_[i | tbit]);
    }
}

void StateVector::controlled_phase(int control, int target, double angle) {
    if (control == target) throw std::invalid_argument("controlled_phase: control equals target");
    const int p0 = std::min(control, target);
    const int p1 = std::max(control, target);
    const std::complex<double> factor = std::exp(kI * angle);
    const std::uint64_t quads = dim() >> 2;
    for (std::uint64_t c = 0; c < quads; ++c)
        amps_[insert_bit(insert_bit(c, p0, 1), p1, 1)] *= factor;
}

void StateVector::swap_qubits(int a, int b) {
    if (a == b) return;
    const std::uint64_t abit = std::uint64_t{1} << a;
    const std::uint64_t bbit = std::uint64_t{1} << b;
    const int p0 = std::min(a, b);
    const int p1 = std::max(a, b);
    const std::uint64_t quads = dim() >> 2;
    for (std::uint64_t c = 0; c < quads; ++c) {
        const std::uint64_t i = insert_bit(insert_bit(c, p0, p0 == a ? 1 : 0), p1, p1 == a ? 1 : 0);
        std::swap(amps_[i], amps_[(i ^ abit) | bbit]);
    }
}

void StateVector::prepare_max_entangled(int reg_a, int reg_b) {
    const int wa = layout_.reg(reg_a).width;
    const int wb = layout_.reg(reg_b).width;
    if (wa != wb)
        throw std::invalid_argument("prepare_max_entangled: register widths differ");
    double occupied = 0.0;
    const std::uint64_t n = dim();
    for (std::uint64_t i = 0; i < n; ++i)
        if (layout_.extract(i, reg_a) != 0 || layout_.extract(i, reg_b) != 0)
            occupied += std::norm(amps_[i]);
    if (occupied > 1e-20)
        throw std::invalid_argument("prepare_max_entangled: registers are not in |0...0>");
    for (int q = 0; q < wa; ++q) hadamard(layout_.qubit(reg_a, q));
    for (int q = 0; q < wa; ++q) cnot(layout_.qubit(reg_a, q), layout_.qubit(reg_b, q));
}

void StateVector::apply_controlled_unitary(int control_qubit, int target_reg,
                                           const Eigen::MatrixXcd& u) {
    const int off = layout_.offset(target_reg);
    const int w = layout_.reg(target_reg).width;
    const std::uint64_t d = std::uint64_t{1} << w;
    if (static_cast<std::uint64_t>(u.rows()) != d || static_cast<std::uint64_t>(u.cols()) != d)
        throw std::invalid_argument("apply_controlled_unitary: matrix does not match register");
    if (control_qubit >= off && control_qubit < off + w)
        throw std::invalid_argument("apply_controlled_unitary: control inside target register");
    const double defect =
        (u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
    if (defect > kUnitaryTol)
        throw std::invalid_argument("apply_controlled_unitary: matrix is not unitary (defect " +
                                    std::to_string(defect) + ")");

    const std::uint64_t cbit = std::uint64_t{1} << control_qubit;
    const std::uint64_t reg_mask = (d - 1) << off;
    const std::uint64_t n = dim();
    Eigen::VectorXcd x(d);
    for (std::uint64_t base = 0; base < n; ++base) {
        if ((base & reg_mask) || !(base & cbit)) continue;
        for (std::uint64_t j = 0; j < d; ++j) x[j] = amps_[base | (j << off)];
        Eigen::VectorXcd y = u * x;
        for (std::uint64_t j = 0; j < d; ++j) amps_[base | (j << off)] = y[j];
    }
}

void StateVector::apply_controlled_diagonal(int control_qubit, int target_reg,
                                            const Eigen::VectorXcd& diag) {
    const int off = layout_.offset(target_reg);
    const int w = layout_.reg(target_reg).width;
    const std::uint64_t d = std::uint64_t{1} << w;
    if (static_cast<std::uint64_t>(diag.size()) != d)
        throw std::invalid_argument("apply_controlled_diagonal: size does not match register");
    if (control_qubit >= off && control_qubit < off + w)
        throw std::invalid_argument("apply_controlled_diagonal: control inside target register");
    for (std::uint64_t j = 0; j < d; ++j)
        if (std::abs(std::abs(diag[j]) - 1.0) > kUnitaryTol)
            throw std::invalid_argument("apply_controlled_diagonal: entries must be unit modulus");

    const std::uint64_t halves = dim() >> 1;
    for (std::uint64_t c = 0; c < halves; ++c) {
        const std::uint64_t i = insert_bit(c, control_qubit, 1);
        amps_[i] *= diag[(i >> off) & (d - 1)];
    }
}

void StateVector::apply_inverse_qft(int reg) {
    const int off = layout_.offset(reg);
    const int w = layout_.reg(reg).width;
    // Adjoint of the forward circuit (H/controlled-phase ladder + bit
    // reversal), so the swaps come first and every phase is conjugated. The
    // ladder ahead of each Hadamard is diagonal, so target qubit q absorbs
    // its q controlled phases into a single table-driven pass: the composed
    // angle for register value j is -pi * (j mod 2^q) / 2^q.
    for (int q = 0; q < w / 2; ++q) swap_qubits(off + q, off + w - 1 - q);
    const double inv = 1.0 / std::numbers::sqrt2;
    std::vector<std::complex<double>> ladder;
    for (int q = 0; q < w; ++q) {
        const std::uint64_t span = std::uint64_t{1} << q;
        ladder.resize(span);
        for (std::uint64_t j = 0; j < span; ++j)
            ladder[j] = std::exp(-kI * (std::numbers::pi * double(j) / double(span)));
        const std::uint64_t bit = std::uint64_t{1} << (off + q);
        const std::uint64_t pairs = dim() >> 1;
        for (std::uint64_t c = 0; c < pairs; ++c) {
            const std::uint64_t i = insert_bit(c, off + q, 0);
            const auto a = amps_[i];
            const auto b = amps_[i | bit] * ladder[(i >> off) & (span - 1)];
            amps_[i] = (a + b) * inv;
            amps_[i | bit] = (a - b) * inv;
        }
    }
}

std::vector<double> StateVector::register_marginal(int reg) const {
    const int off = layout_.offset(reg);
    const int w = layout_.reg(reg).width;
    const std::uint64_t d = std::uint64_t{1} << w;
    std::vector<double> p(d, 0.0);
    const std::uint64_t n = dim();
    for (std::uint64_t i = 0; i < n; ++i) p[(i >> off) & (d - 1)] += std::norm(amps_[i]);
    return p;
}

std::uint64_t StateVector::measure_register(int reg, Rng& rng) {
    const std::vector<double> p = register_marginal(reg);
    double total = 0.0;
    for (double v : p) total += v;
    if (total < 1e-12)
        throw std::runtime_error("measure_register: state has vanished (norm ~ 0)");
    const double u = rng.uniform() * total;
    std::uint64_t outcome = p.size() - 1;
    double acc = 0.0;
    for (std::uint64_t m = 0; m < p.size(); ++m) {
        acc += p[m];
        if (u < acc) {
            outcome = m;
            break;
        }
    }
    const int off = layout_.offset(reg);
    const std::uint64_t mask = (std::uint64_t{p.size()} - 1) << off;
    const double scale = 1.0 / std::sqrt(p[outcome]);
    const std::uint64_t want = outcome << off;
    const std::uint64_t n = dim();
    for (std::uint64_t i = 0; i < n; ++i)
        amps_[i] = ((i & mask) == want) ? amps_[i] * scale : std::complex<double>{0.0, 0.0};
    return outcome;
}

}  // namespace qwl
