#include "qwl/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qwl/svg_plot.hpp"

namespace fs = std::filesystem;

namespace qwl {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

// ---------------------------------------------------------------------------
// Config value parsing
// ---------------------------------------------------------------------------

long long parse_ll(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': cannot parse '" + value +
                                    "' as an integer");
    }
}

int parse_int_value(const std::string& key, const std::string& value) {
    const long long v = parse_ll(key, value);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw std::invalid_argument("config key '" + key + "': value '" + value +
                                    "' is out of range");
    return static_cast<int>(v);
}

std::uint64_t parse_u64_value(const std::string& key, const std::string& value) {
    if (!value.empty() && value[0] == '-')
        throw std::invalid_argument("config key '" + key + "': '" + value +
                                    "' must be nonnegative");
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': cannot parse '" + value +
                                    "' as a nonnegative integer");
    }
}

double parse_double_value(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': cannot parse '" + value +
                                    "' as a number");
    }
}

bool parse_bool_value(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config key '" + key + "': cannot parse '" + value +
                                "' as a boolean (use true/false)");
}

// ---------------------------------------------------------------------------
// Manifests: flat "key = value" text files, written once with status=running
// before the heavy work and rewritten with status=complete afterwards.
// ---------------------------------------------------------------------------

class Manifest {
  public:
    void add(const std::string& key, const std::string& value) { entries_.push_back({key, value}); }
    void add(const std::string& key, const char* value) { add(key, std::string(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }
    void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
    void add(const std::string& key, double value) { add(key, fmt_full(value)); }
    void add(const std::string& key, bool value) { add(key, value ? "true" : "false"); }

    void set(const std::string& key, const std::string& value) {
        for (auto& [k, v] : entries_)
            if (k == key) {
                v = value;
                return;
            }
        add(key, value);
    }

    void write(const fs::path& path) const {
        std::ofstream file(path);
        if (!file) throw std::runtime_error("cannot write manifest: " + path.string());
        for (const auto& [k, v] : entries_) file << k << " = " << v << "\n";
        if (!file) throw std::runtime_error("manifest write failed: " + path.string());
    }

  private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

void echo_config(Manifest& m, const ExperimentConfig& cfg) {
    m.add("config.model.n_spins", cfg.model.n_spins);
    m.add("config.model.coupling", cfg.model.coupling);
    m.add("config.model.field", cfg.model.field);
    m.add("config.qpe.k", cfg.qpe_k);
    m.add("config.qpe.tier", tier_name(cfg.tier));
    m.add("config.wl.bins", cfg.wl_bins);
    m.add("config.wl.effective_bins", cfg.effective_bins());
    m.add("config.wl.ln_f_init", cfg.ln_f_init);
    m.add("config.wl.gamma", cfg.gamma);
    m.add("config.wl.flatness", cfg.flatness);
    m.add("config.wl.steps_per_check", cfg.steps_per_check);
    m.add("config.wl.max_rounds", cfg.max_rounds);
    m.add("config.wl.max_total_steps", cfg.max_total_steps);
    m.add("config.metropolis.total_steps", cfg.metropolis_total_steps);
    m.add("config.metropolis.burn_in", cfg.metropolis_burn_in);
    m.add("config.grid.beta_min", cfg.grid.beta_min);
    m.add("config.grid.beta_max", cfg.grid.beta_max);
    m.add("config.grid.beta_step", cfg.grid.beta_step);
    m.add("config.grid.beta_cutoff", cfg.grid.beta_cutoff);
    m.add("config.run.count", cfg.runs);
    m.add("config.run.base_seed", cfg.base_seed);
    m.add("config.run.output_dir", cfg.output_dir);
    m.add("config.run.export_traces", cfg.export_traces);
}

Manifest start_manifest(const ExperimentConfig& cfg, const char* command) {
    Manifest m;
    m.add("manifest_version", 1);
    m.add("tool_version", kToolVersion);
    m.add("command", command);
    m.add("status", "running");
    echo_config(m, cfg);
    return m;
}

void finish_manifest(Manifest& m, const std::vector<std::string>& artifacts,
                     Clock::time_point t0) {
    m.add("artifact.count", static_cast<int>(artifacts.size()));
    for (std::size_t i = 0; i < artifacts.size(); ++i)
        m.add("artifact." + std::to_string(i), artifacts[i]);
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    m.add("elapsed_seconds", elapsed);
    m.set("status", "complete");
}

fs::path ensure_output_dir(const ExperimentConfig& cfg) {
    fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory '" + cfg.output_dir +
                                 "': " + ec.message());
    return dir;
}

std::optional<std::string> read_manifest_value(const fs::path& path, const std::string& key) {
    std::ifstream file(path);
    if (!file) return std::nullopt;
    std::string line;
    while (std::getline(file, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        if (trim(line.substr(0, eq)) == key) return trim(line.substr(eq + 1));
    }
    return std::nullopt;
}

std::uint64_t recover_wl_budget(const fs::path& dir) {
    const fs::path manifest = dir / "wl_manifest.txt";
    const auto value = read_manifest_value(manifest, "wl.total_steps_sum");
    if (!value)
        throw std::runtime_error(
            "no Wang-Landau step budget available: set metropolis.total_steps, pass a "
            "reference count, or run the wl experiment into '" +
            dir.string() + "' first");
    try {
        return parse_u64_value("wl.total_steps_sum", *value);
    } catch (const std::invalid_argument&) {
        throw std::runtime_error("malformed wl.total_steps_sum in " + manifest.string());
    }
}

// ---------------------------------------------------------------------------
// Curve aggregation and comparison summaries
// ---------------------------------------------------------------------------

struct QuantityMeta {
    const char* file;   // file stem for charts
    const char* title;
    const char* ylabel;
    std::vector<double> ThermoCurves::*value;
    std::vector<double> ThermoCurves::*sd;
};

constexpr QuantityMeta kQuantities[] = {
    {"internal_energy", "Internal energy", "U", &ThermoCurves::internal_energy,
     &ThermoCurves::internal_energy_sd},
    {"heat_capacity", "Heat capacity", "Cv", &ThermoCurves::heat_capacity,
     &ThermoCurves::heat_capacity_sd},
    {"entropy", "Entropy", "S", &ThermoCurves::entropy, &ThermoCurves::entropy_sd},
    {"free_energy", "Free energy", "F", &ThermoCurves::free_energy,
     &ThermoCurves::free_energy_sd},
};

// Pointwise mean and sample standard deviation across runs on a shared grid.
ThermoCurves aggregate_runs(const std::vector<ThermoCurves>& runs) {
    if (runs.empty()) throw std::invalid_argument("aggregate_runs: no runs");
    const std::size_t n = runs.size();
    const std::size_t m = runs.front().size();
    for (const auto& r : runs)
        if (r.size() != m) throw std::invalid_argument("aggregate_runs: grid size mismatch");
    ThermoCurves agg;
    agg.beta = runs.front().beta;
    for (const auto& q : kQuantities) {
        auto& mean_out = agg.*(q.value);
        auto& sd_out = agg.*(q.sd);
        mean_out.resize(m);
        sd_out.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            double mean = 0.0;
            for (const auto& r : runs) mean += (r.*(q.value))[i];
            mean /= static_cast<double>(n);
            double ss = 0.0;
            for (const auto& r : runs) {
                const double d = (r.*(q.value))[i] - mean;
                ss += d * d;
            }
            mean_out[i] = mean;
            sd_out[i] = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
        }
    }
    return agg;
}

struct ErrorStats {
    double rmse = 0.0;
    double max_abs = 0.0;
    int n_points = 0;
};

ErrorStats error_stats(const std::vector<double>& diffs) {
    ErrorStats s;
    double ss = 0.0;
    for (double d : diffs) {
        if (!std::isfinite(d)) continue;
        ss += d * d;
        s.max_abs = std::max(s.max_abs, std::abs(d));
        ++s.n_points;
    }
    s.rmse = s.n_points > 0 ? std::sqrt(ss / s.n_points) : 0.0;
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// BetaGrid / ExperimentConfig
// ---------------------------------------------------------------------------

std::vector<double> BetaGrid::points() const {
    validate();
    const int n = static_cast<int>(std::floor((beta_max - beta_min) / beta_step + 1e-9)) + 1;
    std::vector<double> pts(n);
    for (int i = 0; i < n; ++i) pts[i] = beta_min + i * beta_step;
    return pts;
}

void BetaGrid::validate() const {
    if (!std::isfinite(beta_min) || !std::isfinite(beta_max) || !std::isfinite(beta_step) ||
        !std::isfinite(beta_cutoff))
        throw std::invalid_argument("beta grid values must be finite");
    if (beta_min < 0.0) throw std::invalid_argument("grid.beta_min must be nonnegative");
    if (beta_step <= 0.0) throw std::invalid_argument("grid.beta_step must be positive");
    if (beta_max < beta_min)
        throw std::invalid_argument("grid.beta_max must be at least grid.beta_min");
    if (beta_cutoff < beta_min)
        throw std::invalid_argument("grid.beta_cutoff must be at least grid.beta_min");
}

QpeConfig ExperimentConfig::qpe_config() const {
    return QpeConfig{qpe_k, energy_window(model), tier};
}

int ExperimentConfig::effective_bins() const {
    if (wl_bins > 0) return wl_bins;
    return static_cast<int>(std::min<std::uint64_t>(std::uint64_t{1} << qpe_k, 64));
}

WlConfig ExperimentConfig::wl_config() const {
    WlConfig wl;
    wl.bin_spec = BinSpec{effective_bins(), energy_window(model)};
    wl.ln_f_init = ln_f_init;
    wl.gamma = gamma;
    wl.flatness = flatness;
    wl.steps_per_check = steps_per_check;
    wl.max_rounds = max_rounds;
    wl.max_total_steps = max_total_steps;
    wl.record_steps = export_traces;
    return wl;
}

void ExperimentConfig::validate() const {
    model.validate();
    qpe_config().validate();
    wl_config().validate();
    grid.validate();
    if (runs < 1) throw std::invalid_argument("run.count must be at least 1");
    if (output_dir.empty()) throw std::invalid_argument("run.output_dir must not be empty");
    if (metropolis_total_steps > 0 && metropolis_burn_in >= metropolis_total_steps)
        throw std::invalid_argument(
            "metropolis.burn_in must stay below metropolis.total_steps");
}

// ---------------------------------------------------------------------------
// Config files
// ---------------------------------------------------------------------------

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "model.n_spins") {
        cfg.model.n_spins = parse_int_value(key, value);
    } else if (key == "model.coupling") {
        cfg.model.coupling = parse_double_value(key, value);
    } else if (key == "model.field") {
        cfg.model.field = parse_double_value(key, value);
    } else if (key == "qpe.k") {
        cfg.qpe_k = parse_int_value(key, value);
    } else if (key == "qpe.tier") {
        const auto tier = parse_tier(value);
        if (!tier)
            throw std::invalid_argument(
                "config key 'qpe.tier': unknown tier '" + value +
                "' (expected pair_statevector, eigen_statevector, or analytic)");
        cfg.tier = *tier;
    } else if (key == "wl.bins") {
        cfg.wl_bins = parse_int_value(key, value);
    } else if (key == "wl.ln_f_init") {
        cfg.ln_f_init = parse_double_value(key, value);
    } else if (key == "wl.gamma") {
        cfg.gamma = parse_double_value(key, value);
    } else if (key == "wl.flatness") {
        cfg.flatness = parse_double_value(key, value);
    } else if (key == "wl.steps_per_check") {
        cfg.steps_per_check = parse_u64_value(key, value);
    } else if (key == "wl.max_rounds") {
        cfg.max_rounds = parse_int_value(key, value);
    } else if (key == "wl.max_total_steps") {
        cfg.max_total_steps = parse_u64_value(key, value);
    } else if (key == "metropolis.total_steps") {
        cfg.metropolis_total_steps = parse_u64_value(key, value);
    } else if (key == "metropolis.burn_in") {
        cfg.metropolis_burn_in = parse_u64_value(key, value);
    } else if (key == "grid.beta_min") {
        cfg.grid.beta_min = parse_double_value(key, value);
    } else if (key == "grid.beta_max") {
        cfg.grid.beta_max = parse_double_value(key, value);
    } else if (key == "grid.beta_step") {
        cfg.grid.beta_step = parse_double_value(key, value);
    } else if (key == "grid.beta_cutoff") {
        cfg.grid.beta_cutoff = parse_double_value(key, value);
    } else if (key == "run.count") {
        cfg.runs = parse_int_value(key, value);
    } else if (key == "run.base_seed") {
        cfg.base_seed = parse_u64_value(key, value);
    } else if (key == "run.output_dir") {
        cfg.output_dir = value;
    } else if (key == "run.export_traces") {
        cfg.export_traces = parse_bool_value(key, value);
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::string context = path + ":" + std::to_string(line_no);
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(context + ": expected 'key = value', got '" + stripped +
                                        "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument(context + ": empty key");
        if (value.empty())
            throw std::invalid_argument(context + ": empty value for key '" + key + "'");
        if (!seen.insert(key).second)
            throw std::invalid_argument(context + ": duplicate key '" + key + "'");
        try {
            apply_config_entry(cfg, key, value);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(context + ": " + e.what());
        }
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Experiment runners
// ---------------------------------------------------------------------------

ThermoCurves run_exact_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t0 = Clock::now();
    const fs::path dir = ensure_output_dir(cfg);
    Manifest man = start_manifest(cfg, "exact");
    man.write(dir / "exact_manifest.txt");

    const Spectrum spectrum = diagonalize(build_tfim(cfg.model), false);
    write_spectrum_fixture((dir / "spectrum.txt").string(), cfg.model, spectrum);
    const ThermoCurves curves = exact_thermo(spectrum, cfg.grid.points());
    write_curves_csv((dir / "exact_curves.csv").string(), curves);

    finish_manifest(man, {"spectrum.txt", "exact_curves.csv"}, t0);
    man.write(dir / "exact_manifest.txt");
    return curves;
}

WlExperimentResult run_wl_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t0 = Clock::now();
    const fs::path dir = ensure_output_dir(cfg);
    Manifest man = start_manifest(cfg, "wl");
    man.write(dir / "wl_manifest.txt");

    const bool need_vectors = cfg.tier != QpeTier::analytic;
    const Spectrum spectrum = diagonalize(build_tfim(cfg.model), need_vectors);
    const EnergySampler sampler(spectrum, cfg.qpe_config());
    const WlConfig wl_cfg = cfg.wl_config();
    const std::vector<double> beta = cfg.grid.points();

    WlExperimentResult out;
    std::vector<ThermoCurves> per_run;
    for (int r = 0; r < cfg.runs; ++r) {
        const std::uint64_t seed = derive_seed(cfg.base_seed, 1, static_cast<std::uint64_t>(r));
        Rng rng(seed);
        const WlResult wl = run_quantum_wl(sampler, wl_cfg, rng);

        const std::string dos_name = "wl_run" + std::to_string(r) + "_dos.csv";
        write_dos_csv((dir / dos_name).string(), wl.dos, wl_cfg.bin_spec);
        out.artifacts.push_back(dos_name);
        if (cfg.export_traces) {
            const std::string trace_name = "wl_run" + std::to_string(r) + "_trace.csv";
            write_trace_csv((dir / trace_name).string(), wl.trace);
            out.artifacts.push_back(trace_name);
        }

        per_run.push_back(thermo_from_dos(wl.dos, wl_cfg.bin_spec, beta));
        out.total_steps += wl.trace.total_steps;
        out.rounds_per_run.push_back(wl.trace.rounds_completed);

        const std::string prefix = "run." + std::to_string(r) + ".";
        man.add(prefix + "seed", seed);
        man.add(prefix + "total_steps", wl.trace.total_steps);
        man.add(prefix + "rounds_completed", wl.trace.rounds_completed);
        man.add(prefix + "converged", wl.trace.converged);
    }

    out.curves = aggregate_runs(per_run);
    write_curves_csv((dir / "wl_curves.csv").string(), out.curves);
    out.artifacts.push_back("wl_curves.csv");

    man.add("wl.total_steps_sum", out.total_steps);
    finish_manifest(man, out.artifacts, t0);
    man.write(dir / "wl_manifest.txt");
    return out;
}

MetropolisExperimentResult run_metropolis_experiment(const ExperimentConfig& cfg,
                                                     std::uint64_t wl_total_steps) {
    cfg.validate();
    const auto t0 = Clock::now();
    const fs::path dir = ensure_output_dir(cfg);
    Manifest man = start_manifest(cfg, "metropolis");
    man.write(dir / "metropolis_manifest.txt");

    const std::vector<double> beta = cfg.grid.points();
    for (double b : beta)
        if (!(b > 0.0))
            throw std::invalid_argument(
                "metropolis thermodynamics requires beta > 0 at every grid point");

    MetropolisExperimentResult out;
    const std::uint64_t chains =
        static_cast<std::uint64_t>(cfg.runs) * static_cast<std::uint64_t>(beta.size());
    std::uint64_t counted_per_chain = 0;
    if (cfg.metropolis_total_steps > 0) {
        out.per_chain_steps = cfg.metropolis_total_steps;
        counted_per_chain = out.per_chain_steps - cfg.metropolis_burn_in;
    } else {
        // Match the sampling budget: post-burn-in steps across all chains add
        // up to (at least, within one step per chain) the WL total.
        out.wl_reference_steps = wl_total_steps > 0 ? wl_total_steps : recover_wl_budget(dir);
        counted_per_chain = (out.wl_reference_steps + chains - 1) / chains;
        if (counted_per_chain == 0) counted_per_chain = 1;
        out.per_chain_steps = cfg.metropolis_burn_in + counted_per_chain;
    }
    out.counted_steps = counted_per_chain * chains;

    const bool need_vectors = cfg.tier != QpeTier::analytic;
    const Spectrum spectrum = diagonalize(build_tfim(cfg.model), need_vectors);
    const EnergySampler sampler(spectrum, cfg.qpe_config());

    std::vector<ThermoCurves> per_run;
    for (int r = 0; r < cfg.runs; ++r) {
        ThermoCurves c;
        c.beta = beta;
        c.internal_energy.resize(beta.size());
        c.heat_capacity.resize(beta.size());
        for (std::size_t bi = 0; bi < beta.size(); ++bi) {
            const std::uint64_t seed = derive_seed(cfg.base_seed, 2, static_cast<std::uint64_t>(r),
                                                   static_cast<std::uint64_t>(bi));
            Rng rng(seed);
            MetropolisConfig mc;
            mc.beta = beta[bi];
            mc.total_steps = out.per_chain_steps;
            mc.burn_in = cfg.metropolis_burn_in;
            const MetropolisRun run = run_quantum_metropolis(sampler, mc, rng);
            const EnergyMoments mom = moments(run.trace, beta[bi]);
            c.internal_energy[bi] = mom.internal_energy;
            c.heat_capacity[bi] = mom.heat_capacity;
            if (cfg.export_traces) {
                const std::string name = "metropolis_run" + std::to_string(r) + "_beta" +
                                         std::to_string(bi) + ".txt";
                write_energy_trace((dir / name).string(), run.trace, seed);
                out.artifacts.push_back(name);
            }
        }
        c.entropy = entropy_from_cv(beta, c.heat_capacity, cfg.grid.beta_cutoff);
        c.free_energy = free_energy(c.internal_energy, c.entropy, beta);
        per_run.push_back(std::move(c));
    }

    out.curves = aggregate_runs(per_run);
    write_curves_csv((dir / "metropolis_curves.csv").string(), out.curves);
    out.artifacts.push_back("metropolis_curves.csv");

    man.add("metropolis.wl_reference_steps", out.wl_reference_steps);
    man.add("metropolis.per_chain_total_steps", out.per_chain_steps);
    man.add("metropolis.per_chain_burn_in", cfg.metropolis_burn_in);
    man.add("metropolis.counted_steps_per_chain", counted_per_chain);
    man.add("metropolis.chain_count", chains);
    man.add("metropolis.counted_steps_sum", out.counted_steps);
    finish_manifest(man, out.artifacts, t0);
    man.write(dir / "metropolis_manifest.txt");
    return out;
}

void run_compare_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t0 = Clock::now();
    const fs::path dir = ensure_output_dir(cfg);
    Manifest man = start_manifest(cfg, "compare");
    man.write(dir / "compare_manifest.txt");

    const ThermoCurves exact = run_exact_experiment(cfg);
    const WlExperimentResult wl = run_wl_experiment(cfg);
    const MetropolisExperimentResult metro = run_metropolis_experiment(cfg, wl.total_steps);

    const ThermoCurves wl_err = error_curves(wl.curves, exact);
    const ThermoCurves metro_err = error_curves(metro.curves, exact);
    std::vector<std::string> artifacts;
    write_curves_csv((dir / "wl_error_curves.csv").string(), wl_err);
    artifacts.push_back("wl_error_curves.csv");
    write_curves_csv((dir / "metropolis_error_curves.csv").string(), metro_err);
    artifacts.push_back("metropolis_error_curves.csv");

    for (const auto& q : kQuantities) {
        const std::string value_name = std::string(q.file) + ".svg";
        write_line_chart((dir / value_name).string(),
                         std::string(q.title) + " vs inverse temperature", "beta", q.ylabel,
                         {
                             {"exact", "#000000", exact.beta, exact.*(q.value), {}},
                             {"wang-landau", "#1f77b4", wl.curves.beta, wl.curves.*(q.value),
                              wl.curves.*(q.sd)},
                             {"metropolis", "#d62728", metro.curves.beta,
                              metro.curves.*(q.value), metro.curves.*(q.sd)},
                         });
        artifacts.push_back(value_name);

        const std::string err_name = std::string(q.file) + "_error.svg";
        write_line_chart((dir / err_name).string(),
                         std::string(q.title) + " deviation from exact", "beta",
                         std::string(q.ylabel) + " error",
                         {
                             {"wang-landau", "#1f77b4", wl_err.beta, wl_err.*(q.value),
                              wl_err.*(q.sd)},
                             {"metropolis", "#d62728", metro_err.beta, metro_err.*(q.value),
                              metro_err.*(q.sd)},
                         });
        artifacts.push_back(err_name);
    }

    {
        std::ofstream summary(dir / "compare_summary.txt");
        if (!summary) throw std::runtime_error("cannot write compare summary");
        summary << "wl_total_steps = " << wl.total_steps << "\n";
        summary << "metropolis_counted_steps = " << metro.counted_steps << "\n";
        summary << "# method quantity rmse max_abs n_points\n";
        for (const auto& q : kQuantities) {
            const ErrorStats ws = error_stats(wl_err.*(q.value));
            summary << "wl " << q.file << " " << fmt_short(ws.rmse) << " "
                    << fmt_short(ws.max_abs) << " " << ws.n_points << "\n";
        }
        for (const auto& q : kQuantities) {
            const ErrorStats ms = error_stats(metro_err.*(q.value));
            summary << "metropolis " << q.file << " " << fmt_short(ms.rmse) << " "
                    << fmt_short(ms.max_abs) << " " << ms.n_points << "\n";
        }
    }
    artifacts.push_back("compare_summary.txt");

    finish_manifest(man, artifacts, t0);
    man.write(dir / "compare_manifest.txt");
}

// ---------------------------------------------------------------------------
// Validation battery
// ---------------------------------------------------------------------------

namespace {

struct Battery {
    std::ostream& out;
    int failures = 0;
    void check(const char* name, bool ok, const std::string& detail) {
        out << (ok ? "ok   " : "FAIL ") << name;
        if (!detail.empty()) out << " (" << detail << ")";
        out << "\n";
        if (!ok) ++failures;
    }
};

}  // namespace

int run_validation_battery(const ExperimentConfig& cfg, std::ostream& out) {
    cfg.validate();
    Battery b{out};

    // The battery must stay fast at any configured scale, so dense-matrix
    // checks cap the spin count and the phase resolution.
    HamiltonianSpec base = cfg.model;
    base.n_spins = std::min(base.n_spins, 8);

    const Eigen::MatrixXd hamiltonian = build_tfim(base);
    const double trace = hamiltonian.trace();
    b.check("hamiltonian_trace_zero",
            std::abs(trace) <= 1e-9 * std::max(1.0, hamiltonian.cwiseAbs().maxCoeff()),
            "trace = " + fmt_short(trace));

    const Spectrum spectrum = diagonalize(hamiltonian, true);
    HamiltonianSpec flipped = base;
    flipped.field = -base.field;
    const Spectrum spectrum_flipped = diagonalize(build_tfim(flipped), false);
    const double flip_dev =
        (spectrum.eigenvalues - spectrum_flipped.eigenvalues).cwiseAbs().maxCoeff();
    b.check("field_sign_spectrum_invariance", flip_dev <= 1e-9,
            "max eigenvalue shift = " + fmt_short(flip_dev));

    const Eigen::MatrixXd rebuilt = spectrum.eigenvectors *
                                    spectrum.eigenvalues.asDiagonal() *
                                    spectrum.eigenvectors.transpose();
    const double rebuild_dev = (rebuilt - hamiltonian).cwiseAbs().maxCoeff();
    b.check("eigendecomposition_reconstruction", rebuild_dev <= 1e-8,
            "max |V D V^T - H| = " + fmt_short(rebuild_dev));

    const std::vector<double> beta = cfg.grid.points();
    const ThermoCurves exact = exact_thermo(spectrum, beta);
    double identity_dev = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) {
        if (!(beta[i] > 0.0)) continue;
        identity_dev = std::max(identity_dev,
                                std::abs(exact.free_energy[i] -
                                         (exact.internal_energy[i] - exact.entropy[i] / beta[i])));
    }
    b.check("free_energy_identity", identity_dev <= 1e-9,
            "max |F - (U - S/beta)| = " + fmt_short(identity_dev));

    bool entropy_monotone = true;
    for (std::size_t i = 1; i < beta.size(); ++i)
        if (exact.entropy[i] > exact.entropy[i - 1] + 1e-12) entropy_monotone = false;
    const ThermoCurves hot = exact_thermo(spectrum, {1e-9});
    const double s_hot_dev = std::abs(hot.entropy[0] - base.n_spins * std::numbers::ln2);
    b.check("entropy_monotone_from_ln2", entropy_monotone && s_hot_dev <= 1e-6,
            "S(beta->0) deviation from N ln 2 = " + fmt_short(s_hot_dev));

    const BinSpec bins{cfg.effective_bins(), energy_window(base)};
    const auto level_counts = brute_force_dos(spectrum, bins);
    std::int64_t level_total = 0;
    for (auto c : level_counts) level_total += c;
    const std::int64_t expected_total = std::int64_t{1} << base.n_spins;
    b.check("binned_level_count", level_total == expected_total,
            "sum = " + std::to_string(level_total) + ", expected " +
                std::to_string(expected_total));

    const int k = std::min(cfg.qpe_k, 12);
    const QpeConfig qpe{k, energy_window(base), QpeTier::analytic};
    bool roundtrip_ok = true;
    const std::uint64_t lattice = qpe.n_outcomes();
    for (std::uint64_t m : {std::uint64_t{0}, lattice / 2, lattice - 1}) {
        const double phase = phase_of_energy(energy_of_outcome(m, qpe), qpe);
        if (std::abs(phase * static_cast<double>(lattice) - static_cast<double>(m)) > 1e-6)
            roundtrip_ok = false;
    }
    b.check("qpe_lattice_roundtrip", roundtrip_ok, "outcomes 0, mid, top");

    bool dist_ok = true;
    double worst_sum_dev = 0.0;
    for (double phase : {0.0, 0.3, 0.777, 1.0 - std::ldexp(1.0, -k)}) {
        const auto dist = analytic_outcome_distribution(phase, k);
        double sum = 0.0;
        for (double p : dist) {
            if (p < 0.0) dist_ok = false;
            sum += p;
        }
        worst_sum_dev = std::max(worst_sum_dev, std::abs(sum - 1.0));
    }
    b.check("qpe_distribution_normalized", dist_ok && worst_sum_dev <= 1e-10,
            "max |sum - 1| = " + fmt_short(worst_sum_dev));

    // Statevector tier against the closed-form outcome mixture on a two-spin
    // model small enough to sample heavily.
    {
        const HamiltonianSpec mini{2, base.coupling != 0.0 ? base.coupling : 2.0,
                                   base.field != 0.0 ? base.field : 1.0};
        const Spectrum mini_sp = diagonalize(build_tfim(mini), true);
        const QpeConfig mini_cfg{5, energy_window(mini), QpeTier::eigen_statevector};
        const EnergySampler mini_sampler(mini_sp, mini_cfg);
        const std::size_t n_outcomes = mini_cfg.n_outcomes();
        std::vector<double> mixture(n_outcomes, 0.0);
        for (int i = 0; i < mini_sp.n_states(); ++i) {
            const auto dist =
                analytic_outcome_distribution(phase_of_energy(mini_sp.eigenvalues[i], mini_cfg),
                                              mini_cfg.k);
            for (std::size_t m = 0; m < n_outcomes; ++m)
                mixture[m] += dist[m] / mini_sp.n_states();
        }
        const int n_draws = 20000;
        std::vector<double> empirical(n_outcomes, 0.0);
        Rng rng(derive_seed(cfg.base_seed, 3, 1));
        for (int s = 0; s < n_draws; ++s) empirical[mini_sampler.sample(rng).outcome] += 1.0;
        double tv = 0.0;
        for (std::size_t m = 0; m < n_outcomes; ++m)
            tv += std::abs(empirical[m] / n_draws - mixture[m]);
        tv *= 0.5;
        b.check("tier_outcome_agreement", tv <= 0.03,
                "total variation = " + fmt_short(tv) + ", limit 0.03");
    }

    // Eigenstate draws must be uniform; chi-square against the flat law with
    // a generous (~6 sigma) bound.
    {
        HamiltonianSpec u = base;
        u.n_spins = std::min(u.n_spins, 6);
        const Spectrum usp = diagonalize(build_tfim(u), false);
        const QpeConfig ucfg{std::min(cfg.qpe_k, 10), energy_window(u), QpeTier::analytic};
        const EnergySampler usampler(usp, ucfg);
        const int n_draws = 20000;
        const int n_cells = usp.n_states();
        std::vector<int> counts(n_cells, 0);
        Rng rng(derive_seed(cfg.base_seed, 3, 2));
        bool index_present = true;
        for (int s = 0; s < n_draws; ++s) {
            const QpeSample sample = usampler.sample(rng);
            if (!sample.eigen_index) {
                index_present = false;
                break;
            }
            ++counts[*sample.eigen_index];
        }
        double chi2 = 0.0;
        const double expect = static_cast<double>(n_draws) / n_cells;
        for (int c : counts) chi2 += (c - expect) * (c - expect) / expect;
        const double dof = n_cells - 1;
        const double bound = dof + 10.0 * std::sqrt(2.0 * dof) + 25.0;
        b.check("eigenstate_draw_uniform", index_present && chi2 <= bound,
                "chi2 = " + fmt_short(chi2) + ", bound " + fmt_short(bound));
    }

    // Flat-histogram machinery against exactly countable degeneracies of the
    // four-spin classical ring: E in {-4J, 0, +4J} with counts {2, 12, 2}.
    {
        const ClassicalIsingChain chain{4, base.coupling != 0.0 ? base.coupling : 2.0};
        const double span = 4.0 * std::abs(chain.coupling) + 2.0;
        WlConfig wl_cfg;
        wl_cfg.bin_spec = BinSpec{9, {-span, span}};
        wl_cfg.steps_per_check = 2000;
        wl_cfg.max_rounds = 12;
        wl_cfg.max_total_steps = 2'000'000;
        Rng rng(derive_seed(cfg.base_seed, 3, 3));
        const WlResult res = run_classical_wl(chain, wl_cfg, rng);

        const double j4 = 4.0 * std::abs(chain.coupling);
        const int bin_lo = bin_of(-j4, wl_cfg.bin_spec);
        const int bin_mid = bin_of(0.0, wl_cfg.bin_spec);
        const int bin_hi = bin_of(j4, wl_cfg.bin_spec);
        bool bins_ok = res.dos.n_visited() == 3 && res.dos.visited[bin_lo] &&
                       res.dos.visited[bin_mid] && res.dos.visited[bin_hi];
        double dev = 0.0;
        if (bins_ok) {
            dev = std::max({std::abs(res.dos.ln_g[bin_lo] - std::log(2.0)),
                            std::abs(res.dos.ln_g[bin_mid] - std::log(12.0)),
                            std::abs(res.dos.ln_g[bin_hi] - std::log(2.0))});
        }
        b.check("classical_flat_histogram_degeneracies", bins_ok && dev <= 0.4,
                bins_ok ? "max |ln g - ln count| = " + fmt_short(dev)
                        : "visited bins = " + std::to_string(res.dos.n_visited()) +
                              ", expected 3");
    }

    out << "checks_failed = " << b.failures << "\n";
    return b.failures;
}

}  // namespace qwl
