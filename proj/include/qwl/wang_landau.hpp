#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qwl/qpe.hpp"
#include "qwl/rng.hpp"
#include "qwl/types.hpp"

namespace qwl {

struct WlConfig {
    BinSpec bin_spec;
    double ln_f_init = 1.0;
    double gamma = 0.5;      // ln_f shrink factor per completed round
    double flatness = 0.8;   // c in the flatness test
    std::uint64_t steps_per_check = 10000;
    int max_rounds = 18;
    // Safety budget: a chain that cannot flatten (e.g. a rare far-tail bin
    // appeared late) stops here and reports rounds_completed < max_rounds.
    std::uint64_t max_total_steps = 5'000'000;
    bool record_steps = false;
    void validate() const;
};

enum class FlatnessResult { flat, not_flat };

// Flat-histogram acceptance: move i -> j passes iff
// u < min(1, g(E_i)/g(E_j)) with strict comparison.
bool wl_accept(double ln_g_current, double ln_g_proposed, double u);

// One visit: ln_g[bin] += ln_f, counts[bin] += 1, bin becomes visited.
void wl_update(DosEstimate& dos, Histogram& hist, int bin, double ln_f);

// Flat iff every visited bin's count lies in [c*mean, (2-c)*mean], the mean
// taken over visited bins only; the boundaries themselves count as flat.
FlatnessResult check_histogram(const Histogram& hist, const std::vector<std::uint8_t>& visited,
                               double flatness);

struct WlStepRecord {
    std::uint64_t step;
    int round;
    int bin;        // bin holding the walker after the step
    double energy;  // energy retained after the step
    bool accepted;
};

struct WlRoundRecord {
    int round;
    double ln_f;  // modification factor in force during the round
    std::uint64_t steps_used;
};

struct WlTrace {
    std::vector<WlStepRecord> steps;  // populated only when record_steps
    std::vector<WlRoundRecord> rounds;
    std::uint64_t total_steps = 0;
    int rounds_completed = 0;
    bool converged = false;  // reached max_rounds flat checks
};

struct WlResult {
    DosEstimate dos;
    WlTrace trace;
};

struct WlProposal {
    int bin = 0;
    double energy = 0.0;
};

// Shifts ln_g so that sum over visited bins of exp(ln_g) = exp(ln_total);
// unvisited entries become NaN.
void normalize_dos(DosEstimate& dos, double ln_total);

namespace detail {
// A bin first visited after others have accumulated weight enters at the
// current visited minimum instead of zero; otherwise the walker would be
// trapped there for ~(min ln_g)/ln_f steps, which at late rounds exceeds any
// reasonable budget.
inline void seed_new_bin(DosEstimate& dos, int bin) {
    if (dos.visited[bin]) return;
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dos.ln_g.size(); ++i)
        if (dos.visited[i]) lo = std::min(lo, dos.ln_g[i]);
    if (lo != std::numeric_limits<double>::infinity()) dos.ln_g[bin] = lo;
}
}  // namespace detail

// Flat-histogram driver over an arbitrary move source. Mover must provide
//   WlProposal initial(Rng&);          one-time starting sample
//   WlProposal propose(Rng&);          candidate for the next step
//   void commit(); void revert();      accept/reject bookkeeping
// A round is steps_per_check sweeps followed by a flatness check; on flat the
// histogram resets and ln_f shrinks by gamma. Rejected steps update the
// retained bin, so every step increments exactly one histogram entry.
template <class Mover>
WlResult run_wl_chain(Mover& mover, const WlConfig& cfg, Rng& rng) {
    cfg.validate();
    const int ell = cfg.bin_spec.ell;
    WlResult out;
    out.dos.ln_g.assign(ell, 0.0);
    out.dos.visited.assign(ell, 0);
    Histogram hist;
    hist.counts.assign(ell, 0);

    double ln_f = cfg.ln_f_init;
    int round = 0;
    std::uint64_t total = 0;
    std::uint64_t in_round = 0;
    bool out_of_budget = false;

    WlProposal current = mover.initial(rng);
    while (round < cfg.max_rounds && !out_of_budget) {
        for (std::uint64_t s = 0; s < cfg.steps_per_check; ++s) {
            WlProposal proposed = mover.propose(rng);
            const double u = rng.uniform();
            const bool accepted =
                wl_accept(out.dos.ln_g[current.bin], out.dos.ln_g[proposed.bin], u);
            if (accepted) {
                mover.commit();
                current = proposed;
            } else {
                mover.revert();
            }
            detail::seed_new_bin(out.dos, current.bin);
            wl_update(out.dos, hist, current.bin, ln_f);
            ++total;
            ++in_round;
            if (cfg.record_steps)
                out.trace.steps.push_back({total, round, current.bin, current.energy, accepted});
            if (total >= cfg.max_total_steps) {
                out_of_budget = true;
                break;
            }
        }
        if (check_histogram(hist, out.dos.visited, cfg.flatness) == FlatnessResult::flat) {
            out.trace.rounds.push_back({round, ln_f, in_round});
            std::fill(hist.counts.begin(), hist.counts.end(), 0);
            ln_f *= cfg.gamma;
            ++round;
            in_round = 0;
        }
    }
    out.trace.total_steps = total;
    out.trace.rounds_completed = round;
    out.trace.converged = round >= cfg.max_rounds;
    return out;
}

// Quantum walk: proposals are iid energy measurements of uniformly drawn
// eigenstates. The sampler's window must match the bin window.
WlResult run_quantum_wl(const EnergySampler& sampler, const WlConfig& cfg, Rng& rng);
WlResult run_quantum_wl(const Spectrum& spectrum, const QpeConfig& qpe_cfg, const WlConfig& cfg,
                        Rng& rng);

// Classical periodic Ising chain, E = J * sum_i s_i s_{i+1}, s_i = +-1,
// explored by single-spin-flip moves.
struct ClassicalIsingChain {
    int n_spins = 2;
    double coupling = 0.0;
    void validate() const;
    double energy(const std::vector<int>& spins) const;
};

WlResult run_classical_wl(const ClassicalIsingChain& model, const WlConfig& cfg, Rng& rng);

// CSV schemas used by every exporter of these objects:
//   DOS:   bin_index, e_center, ln_g_normalized, visited
//   trace: step, round, bin, energy, accepted
void write_dos_csv(const std::string& path, const DosEstimate& dos, const BinSpec& bins);
void write_trace_csv(const std::string& path, const WlTrace& trace);

}  // namespace qwl
