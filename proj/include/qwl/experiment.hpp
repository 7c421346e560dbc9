#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qwl/hamiltonian.hpp"
#include "qwl/metropolis.hpp"
#include "qwl/qpe.hpp"
#include "qwl/thermo.hpp"
#include "qwl/wang_landau.hpp"

namespace qwl {

// Single source for the version reported by manifests, the C API and the CLI.
inline constexpr const char* kToolVersion = "0.1.0";

struct BetaGrid {
    double beta_min = 0.05;
    double beta_max = 3.0;
    double beta_step = 0.05;
    double beta_cutoff = 3.0;  // upper limit of the entropy integration
    std::vector<double> points() const;
    void validate() const;
};

// Complete description of one experiment. Config files use one flat
// "section.key = value" assignment per line with '#' comments; unknown keys
// are errors. CLI overrides reuse the same keys.
struct ExperimentConfig {
    HamiltonianSpec model{4, 2.0, 1.0};
    int qpe_k = 8;
    QpeTier tier = QpeTier::analytic;

    int wl_bins = 0;  // 0 selects min(2^k, 64)
    double ln_f_init = 1.0;
    double gamma = 0.5;
    double flatness = 0.8;
    std::uint64_t steps_per_check = 10000;
    int max_rounds = 18;
    std::uint64_t max_total_steps = 5'000'000;

    std::uint64_t metropolis_total_steps = 0;  // 0 budget-matches against WL totals
    std::uint64_t metropolis_burn_in = 5000;

    BetaGrid grid;
    int runs = 20;
    std::uint64_t base_seed = 12345;
    std::string output_dir = "out";
    bool export_traces = false;

    QpeConfig qpe_config() const;
    WlConfig wl_config() const;
    int effective_bins() const;
    void validate() const;
};

ExperimentConfig load_config(const std::string& path);

// Applies one "section.key = value" assignment; throws with the offending key
// in the message on unknown keys or malformed values.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct WlExperimentResult {
    ThermoCurves curves;             // aggregated over runs
    std::uint64_t total_steps = 0;   // summed over runs
    std::vector<int> rounds_per_run;
    std::vector<std::string> artifacts;
};

struct MetropolisExperimentResult {
    ThermoCurves curves;
    std::uint64_t per_chain_steps = 0;      // including burn-in
    std::uint64_t counted_steps = 0;        // post-burn-in, summed over chains
    std::uint64_t wl_reference_steps = 0;   // budget the chains were matched to
    std::vector<std::string> artifacts;
};

// Each runner writes its artifacts plus a manifest into cfg.output_dir and
// also returns the curves for further processing.
ThermoCurves run_exact_experiment(const ExperimentConfig& cfg);
WlExperimentResult run_wl_experiment(const ExperimentConfig& cfg);

// wl_total_steps = 0 means "recover the budget from wl_manifest.txt in the
// output directory"; explicit metropolis.total_steps in the config wins.
MetropolisExperimentResult run_metropolis_experiment(const ExperimentConfig& cfg,
                                                     std::uint64_t wl_total_steps);

// Exact + WL + budget-matched Metropolis + error curves + charts + summary.
void run_compare_experiment(const ExperimentConfig& cfg);

// Fast oracle-consistency battery; prints one line per check and returns the
// number of failures.
int run_validation_battery(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace qwl
