#include "qwl/wang_landau.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qwl {

void WlConfig::validate() const {
    if (bin_spec.ell < 1) throw std::invalid_argument("wl.bins must be positive");
    if (!(bin_spec.window.width() > 0.0))
        throw std::invalid_argument("wl window must have positive width");
    if (!(ln_f_init > 0.0)) throw std::invalid_argument("wl.ln_f_init must be positive");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("wl.gamma must lie in (0, 1)");
    if (!(flatness > 0.0 && flatness <= 1.0))
        throw std::invalid_argument("wl.flatness must lie in (0, 1]");
    if (steps_per_check == 0) throw std::invalid_argument("wl.steps_per_check must be positive");
    if (max_rounds < 1) throw std::invalid_argument("wl.max_rounds must be positive");
    if (max_total_steps < steps_per_check)
        throw std::invalid_argument("wl.max_total_steps must cover at least one check");
}

bool wl_accept(double ln_g_current, double ln_g_proposed, double u) {
    if (ln_g_current >= ln_g_proposed) return u < 1.0;
    return u < std::exp(ln_g_current - ln_g_proposed);
}

void wl_update(DosEstimate& dos, Histogram& hist, int bin, double ln_f) {
    dos.ln_g[bin] += ln_f;
    hist.counts[bin] += 1;
    dos.visited[bin] = 1;
}

FlatnessResult check_histogram(const Histogram& hist, const std::vector<std::uint8_t>& visited,
                               double flatness) {
    if (hist.counts.size() != visited.size())
        throw std::invalid_argument("check_histogram: size mismatch");
    std::uint64_t total = 0;
    int n = 0;
    for (std::size_t i = 0; i < visited.size(); ++i) {
        if (!visited[i]) continue;
        total += hist.counts[i];
        ++n;
    }
    if (n == 0) throw std::invalid_argument("check_histogram: no visited bins");
    const double mean = static_cast<double>(total) / n;
    for (std::size_t i = 0; i < visited.size(); ++i) {
        if (!visited[i]) continue;
        const double h = static_cast<double>(hist.counts[i]);
        if (h < flatness * mean || h > (2.0 - flatness) * mean) return FlatnessResult::not_flat;
    }
    return FlatnessResult::flat;
}

void normalize_dos(DosEstimate& dos, double ln_total) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dos.ln_g.size(); ++i)
        if (dos.visited[i]) peak = std::max(peak, dos.ln_g[i]);
    if (peak == -std::numeric_limits<double>::infinity())
        throw std::invalid_argument("normalize_dos: no visited bins");
    double sum = 0.0;
    for (std::size_t i = 0; i < dos.ln_g.size(); ++i)
        if (dos.visited[i]) sum += std::exp(dos.ln_g[i] - peak);
    const double shift = ln_total - (peak + std::log(sum));
    for (std::size_t i = 0; i < dos.ln_g.size(); ++i)
        dos.ln_g[i] = dos.visited[i] ? dos.ln_g[i] + shift
                                     : std::numeric_limits<double>::quiet_NaN();
    dos.normalized = true;
}

namespace {

struct QuantumMover {
    const EnergySampler* sampler;
    BinSpec bins;
    WlProposal draw(Rng& rng) const {
        const QpeSample s = sampler->sample(rng);
        return {bin_of(s.energy, bins), s.energy};
    }
    WlProposal initial(Rng& rng) { return draw(rng); }
    WlProposal propose(Rng& rng) { return draw(rng); }
    void commit() {}
    void revert() {}
};

struct ClassicalMover {
    const ClassicalIsingChain* model;
    BinSpec bins;
    std::vector<int> spins;
    double current_energy = 0.0;
    int pending_site = -1;
    double pending_energy = 0.0;

    WlProposal initial(Rng& rng) {
        spins.resize(model->n_spins);
        for (auto& s : spins) s = rng.uniform_index(2) ? 1 : -1;
        current_energy = model->energy(spins);
        return {bin_of(current_energy, bins), current_energy};
    }
    WlProposal propose(Rng& rng) {
        const int n = model->n_spins;
        pending_site = static_cast<int>(rng.uniform_index(n));
        const int left = spins[(pending_site + n - 1) % n];
        const int right = spins[(pending_site + 1) % n];
        const double de = -2.0 * model->coupling * spins[pending_site] * (left + right);
        pending_energy = current_energy + de;
        return {bin_of(pending_energy, bins), pending_energy};
    }
    void commit() {
        spins[pending_site] = -spins[pending_site];
        current_energy = pending_energy;
    }
    void revert() {}
};

}  // namespace

WlResult run_quantum_wl(const EnergySampler& sampler, const WlConfig& cfg, Rng& rng) {
    const double dw = std::abs(sampler.config().window.e_lo - cfg.bin_spec.window.e_lo) +
                      std::abs(sampler.config().window.e_hi - cfg.bin_spec.window.e_hi);
    if (dw > 1e-12 * std::max(1.0, cfg.bin_spec.window.width()))
        throw std::invalid_argument("run_quantum_wl: sampler and bin windows differ");
    QuantumMover mover{&sampler, cfg.bin_spec};
    WlResult out = run_wl_chain(mover, cfg, rng);
    normalize_dos(out.dos, sampler.n_spins() * std::numbers::ln2);
    return out;
}

WlResult run_quantum_wl(const Spectrum& spectrum, const QpeConfig& qpe_cfg, const WlConfig& cfg,
                        Rng& rng) {
    EnergySampler sampler(spectrum, qpe_cfg);
    return run_quantum_wl(sampler, cfg, rng);
}

void ClassicalIsingChain::validate() const {
    if (n_spins < 2) throw std::invalid_argument("classical chain needs at least 2 spins");
    if (n_spins > 62) throw std::invalid_argument("classical chain limited to 62 spins");
    if (!(coupling != 0.0)) throw std::invalid_argument("classical coupling must be nonzero");
}

double ClassicalIsingChain::energy(const std::vector<int>& spins) const {
    double bonds = 0.0;
    const int n = n_spins;
    for (int i = 0; i < n; ++i) bonds += spins[i] * spins[(i + 1) % n];
    return coupling * bonds;
}

WlResult run_classical_wl(const ClassicalIsingChain& model, const WlConfig& cfg, Rng& rng) {
    model.validate();
    ClassicalMover mover{&model, cfg.bin_spec};
    WlResult out = run_wl_chain(mover, cfg, rng);
    normalize_dos(out.dos, model.n_spins * std::numbers::ln2);
    return out;
}

void write_dos_csv(const std::string& path, const DosEstimate& dos, const BinSpec& bins) {
    if (dos.ln_g.size() != static_cast<std::size_t>(bins.ell))
        throw std::invalid_argument("write_dos_csv: bin count mismatch");
    std::ofstream file(path);
    if (!file) throw std::runtime_error("write_dos_csv: cannot open " + path);
    file << "bin_index,e_center,ln_g_normalized,visited\n";
    char line[128];
    for (int i = 0; i < bins.ell; ++i) {
        std::snprintf(line, sizeof line, "%d,%.15g,%.15g,%d\n", i, bins.bin_center(i),
                      dos.ln_g[i], dos.visited[i] ? 1 : 0);
        file << line;
    }
    if (!file) throw std::runtime_error("write_dos_csv: write failed for " + path);
}

void write_trace_csv(const std::string& path, const WlTrace& trace) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("write_trace_csv: cannot open " + path);
    file << "step,round,bin,energy,accepted\n";
    char line[128];
    for (const auto& s : trace.steps) {
        std::snprintf(line, sizeof line, "%llu,%d,%d,%.15g,%d\n",
                      static_cast<unsigned long long>(s.step), s.round, s.bin, s.energy,
                      s.accepted ? 1 : 0);
        file << line;
    }
    if (!file) throw std::runtime_error("write_trace_csv: write failed for " + path);
}

}  // namespace qwl
