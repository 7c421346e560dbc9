#include "doctest.h"
#include "qwl/experiment.hpp"
#include "test_support.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace qwl;

namespace {

template <class Exception, class Fn>
std::string thrown_message(Fn&& fn) {
    try {
        fn();
    } catch (const Exception& e) {
        return e.what();
    }
    FAIL("expected exception was not thrown");
    return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

// Small, fast configuration used by the pipeline tests.
ExperimentConfig tiny_config(const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.model = {2, 2.0, 1.0};
    cfg.qpe_k = 5;
    cfg.tier = QpeTier::analytic;
    cfg.wl_bins = 8;
    cfg.steps_per_check = 2000;
    cfg.max_rounds = 8;
    cfg.metropolis_total_steps = 2000;
    cfg.metropolis_burn_in = 200;
    cfg.grid.beta_min = 0.5;
    cfg.grid.beta_max = 3.0;
    cfg.grid.beta_step = 0.5;
    cfg.grid.beta_cutoff = 3.0;
    cfg.runs = 2;
    cfg.output_dir = out_dir;
    return cfg;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("beta grid enumerates inclusive uniform points") {
    BetaGrid grid;  // defaults 0.05 .. 3.0 step 0.05
    const std::vector<double> pts = grid.points();
    REQUIRE(pts.size() == 60);
    CHECK(pts.front() == doctest::Approx(0.05));
    CHECK(pts.back() == doctest::Approx(3.0));
    CHECK(pts[1] - pts[0] == doctest::Approx(0.05));

    BetaGrid single{1.0, 1.0, 0.5, 2.0};
    CHECK(single.points() == std::vector<double>{1.0});

    BetaGrid bad = grid;
    bad.beta_min = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = grid;
    bad.beta_step = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = grid;
    bad.beta_max = 0.01;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = grid;
    bad.beta_cutoff = 0.01;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = grid;
    bad.beta_step = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("defaults pick the documented bin count") {
    ExperimentConfig cfg;
    CHECK(cfg.model.n_spins == 4);
    CHECK(cfg.qpe_k == 8);
    CHECK(cfg.tier == QpeTier::analytic);
    CHECK(cfg.runs == 20);
    CHECK(cfg.base_seed == 12345);
    // wl.bins = 0 selects min(2^k, 64).
    CHECK(cfg.effective_bins() == 64);
    cfg.qpe_k = 5;
    CHECK(cfg.effective_bins() == 32);
    cfg.wl_bins = 17;
    CHECK(cfg.effective_bins() == 17);
    CHECK_NOTHROW(ExperimentConfig{}.validate());
}

TEST_CASE("config entries round-trip through the dotted-key setter") {
    ExperimentConfig cfg;
    apply_config_entry(cfg, "model.n_spins", "3");
    apply_config_entry(cfg, "model.coupling", "1.5");
    apply_config_entry(cfg, "model.field", "0.25");
    apply_config_entry(cfg, "qpe.k", "6");
    apply_config_entry(cfg, "qpe.tier", "pair_statevector");
    apply_config_entry(cfg, "wl.bins", "12");
    apply_config_entry(cfg, "wl.ln_f_init", "0.5");
    apply_config_entry(cfg, "wl.gamma", "0.25");
    apply_config_entry(cfg, "wl.flatness", "0.9");
    apply_config_entry(cfg, "wl.steps_per_check", "500");
    apply_config_entry(cfg, "wl.max_rounds", "7");
    apply_config_entry(cfg, "wl.max_total_steps", "123456");
    apply_config_entry(cfg, "metropolis.total_steps", "5000");
    apply_config_entry(cfg, "metropolis.burn_in", "100");
    apply_config_entry(cfg, "grid.beta_min", "0.1");
    apply_config_entry(cfg, "grid.beta_max", "2.0");
    apply_config_entry(cfg, "grid.beta_step", "0.1");
    apply_config_entry(cfg, "grid.beta_cutoff", "2.0");
    apply_config_entry(cfg, "run.count", "3");
    apply_config_entry(cfg, "run.base_seed", "777");
    apply_config_entry(cfg, "run.output_dir", "results");
    apply_config_entry(cfg, "run.export_traces", "true");

    CHECK(cfg.model.n_spins == 3);
    CHECK(cfg.model.coupling == doctest::Approx(1.5));
    CHECK(cfg.model.field == doctest::Approx(0.25));
    CHECK(cfg.qpe_k == 6);
    CHECK(cfg.tier == QpeTier::pair_statevector);
    CHECK(cfg.wl_bins == 12);
    CHECK(cfg.ln_f_init == doctest::Approx(0.5));
    CHECK(cfg.gamma == doctest::Approx(0.25));
    CHECK(cfg.flatness == doctest::Approx(0.9));
    CHECK(cfg.steps_per_check == 500);
    CHECK(cfg.max_rounds == 7);
    CHECK(cfg.max_total_steps == 123456);
    CHECK(cfg.metropolis_total_steps == 5000);
    CHECK(cfg.metropolis_burn_in == 100);
    CHECK(cfg.grid.beta_min == doctest::Approx(0.1));
    CHECK(cfg.grid.beta_cutoff == doctest::Approx(2.0));
    CHECK(cfg.runs == 3);
    CHECK(cfg.base_seed == 777);
    CHECK(cfg.output_dir == "results");
    CHECK(cfg.export_traces);
}

TEST_CASE("config setter reports the offending key and value") {
    ExperimentConfig cfg;
    CHECK(contains(thrown_message<std::invalid_argument>(
                       [&] { apply_config_entry(cfg, "nope.key", "1"); }),
                   "nope.key"));
    const std::string bad_int = thrown_message<std::invalid_argument>(
        [&] { apply_config_entry(cfg, "qpe.k", "six"); });
    CHECK(contains(bad_int, "qpe.k"));
    CHECK(contains(bad_int, "six"));
    CHECK(contains(thrown_message<std::invalid_argument>(
                       [&] { apply_config_entry(cfg, "wl.steps_per_check", "-5"); }),
                   "nonnegative"));
    CHECK(contains(thrown_message<std::invalid_argument>(
                       [&] { apply_config_entry(cfg, "model.coupling", "2.0x"); }),
                   "2.0x"));
    CHECK(contains(thrown_message<std::invalid_argument>(
                       [&] { apply_config_entry(cfg, "qpe.tier", "magic"); }),
                   "magic"));
    CHECK(contains(thrown_message<std::invalid_argument>(
                       [&] { apply_config_entry(cfg, "run.export_traces", "yep"); }),
                   "true/false"));
}

TEST_CASE("config files parse comments, blanks, and whitespace") {
    testsup::TempDir dir;
    const std::string path = dir.file("run.cfg");
    testsup::write_file(path,
                        "# experiment setup\n"
                        "\n"
                        "model.n_spins = 3\n"
                        "  qpe.k=6   # inline comment\n"
                        "run.output_dir = results\n");
    const ExperimentConfig cfg = load_config(path);
    CHECK(cfg.model.n_spins == 3);
    CHECK(cfg.qpe_k == 6);
    CHECK(cfg.output_dir == "results");
    // Untouched keys keep their defaults.
    CHECK(cfg.runs == 20);
}

TEST_CASE("config file errors carry the file and line number") {
    testsup::TempDir dir;
    const std::string path = dir.file("bad.cfg");

    testsup::write_file(path, "model.n_spins = 3\nmodel.n_spins = 4\n");
    const std::string dup =
        thrown_message<std::invalid_argument>([&] { load_config(path); });
    CHECK(contains(dup, path + ":2"));
    CHECK(contains(dup, "duplicate key"));

    testsup::write_file(path, "qpe.k 8\n");
    CHECK(contains(thrown_message<std::invalid_argument>([&] { load_config(path); }),
                   path + ":1"));

    testsup::write_file(path, "qpe.k =\n");
    CHECK(contains(thrown_message<std::invalid_argument>([&] { load_config(path); }),
                   "empty value"));

    testsup::write_file(path, "qpe.k = ten\n");
    const std::string bad =
        thrown_message<std::invalid_argument>([&] { load_config(path); });
    CHECK(contains(bad, path + ":1"));
    CHECK(contains(bad, "ten"));

    CHECK_THROWS_AS(load_config(dir.file("missing.cfg")), std::runtime_error);
}

TEST_CASE("experiment validation rejects inconsistent settings") {
    ExperimentConfig cfg;
    cfg.runs = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ExperimentConfig{};
    cfg.output_dir.clear();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ExperimentConfig{};
    cfg.metropolis_total_steps = 1000;
    cfg.metropolis_burn_in = 1000;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ExperimentConfig{};
    cfg.model.n_spins = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ExperimentConfig{};
    cfg.qpe_k = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("exact runner writes spectrum, curves, and a complete manifest") {
    testsup::TempDir dir;
    const ExperimentConfig cfg = tiny_config(dir.file("out"));
    const ThermoCurves curves = run_exact_experiment(cfg);

    const auto man = testsup::parse_manifest(dir.file("out") + "/exact_manifest.txt");
    CHECK(man.at("status") == "complete");
    CHECK(man.at("tool_version") == kToolVersion);
    CHECK(man.at("command") == "exact");
    CHECK(man.at("config.model.n_spins") == "2");
    CHECK(man.at("config.wl.effective_bins") == "8");
    CHECK(man.at("artifact.count") == "2");
    CHECK(man.at("artifact.0") == "spectrum.txt");
    CHECK(man.at("artifact.1") == "exact_curves.csv");

    const auto spectrum_lines =
        testsup::lines_of(testsup::read_file(dir.file("out") + "/spectrum.txt"));
    REQUIRE(spectrum_lines.size() == 5);
    CHECK(spectrum_lines[0] == "# 2 2 1");

    const auto csv = testsup::lines_of(testsup::read_file(dir.file("out") + "/exact_curves.csv"));
    REQUIRE(csv.size() == 1 + curves.size());
    CHECK(csv[0] == "beta,U,U_sd,Cv,Cv_sd,S,S_sd,F,F_sd");
    // The file round-trips the returned curve values.
    const Spectrum sp = diagonalize(build_tfim(cfg.model), false);
    const ThermoCurves direct = exact_thermo(sp, cfg.grid.points());
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const auto fields = testsup::csv_fields(csv[1 + i]);
        REQUIRE(fields.size() == 9);
        CHECK(std::stod(fields[1]) == doctest::Approx(direct.internal_energy[i]).epsilon(1e-12));
        CHECK(std::stod(fields[5]) == doctest::Approx(direct.entropy[i]).epsilon(1e-12));
    }
}

TEST_CASE("density runner writes one export per run plus the aggregate") {
    testsup::TempDir dir;
    ExperimentConfig cfg = tiny_config(dir.file("out"));
    const WlExperimentResult res = run_wl_experiment(cfg);

    CHECK(res.rounds_per_run.size() == 2);
    CHECK(res.total_steps > 0);
    const std::string base = dir.file("out") + "/";
    CHECK(std::filesystem::exists(base + "wl_run0_dos.csv"));
    CHECK(std::filesystem::exists(base + "wl_run1_dos.csv"));
    CHECK(std::filesystem::exists(base + "wl_curves.csv"));

    const auto man = testsup::parse_manifest(base + "wl_manifest.txt");
    CHECK(man.at("status") == "complete");
    CHECK(man.at("wl.total_steps_sum") == std::to_string(res.total_steps));
    CHECK(man.at("run.0.seed") == std::to_string(derive_seed(12345, 1, 0)));
    CHECK(man.count("run.1.total_steps") == 1);
    CHECK(man.at("artifact.count") == "3");

    // Same config and seed, fresh directory: byte-identical density exports.
    ExperimentConfig again = cfg;
    again.output_dir = dir.file("out2");
    run_wl_experiment(again);
    CHECK(testsup::read_file(base + "wl_run0_dos.csv") ==
          testsup::read_file(dir.file("out2") + "/wl_run0_dos.csv"));
    CHECK(testsup::read_file(base + "wl_run1_dos.csv") ==
          testsup::read_file(dir.file("out2") + "/wl_run1_dos.csv"));
    CHECK(testsup::read_file(base + "wl_curves.csv") ==
          testsup::read_file(dir.file("out2") + "/wl_curves.csv"));
}

TEST_CASE("fixed-temperature runner respects an explicit step budget") {
    testsup::TempDir dir;
    ExperimentConfig cfg = tiny_config(dir.file("out"));
    const std::size_t n_beta = cfg.grid.points().size();
    const MetropolisExperimentResult res = run_metropolis_experiment(cfg, 0);
    CHECK(res.per_chain_steps == 2000);
    CHECK(res.wl_reference_steps == 0);
    CHECK(res.counted_steps == (2000 - 200) * cfg.runs * n_beta);
    CHECK(res.curves.size() == n_beta);
    CHECK(std::filesystem::exists(dir.file("out") + "/metropolis_curves.csv"));

    const auto man = testsup::parse_manifest(dir.file("out") + "/metropolis_manifest.txt");
    CHECK(man.at("status") == "complete");
    CHECK(man.at("metropolis.per_chain_total_steps") == "2000");
    CHECK(man.at("metropolis.chain_count") == std::to_string(cfg.runs * n_beta));
}

TEST_CASE("budget matching covers the reference with less than one extra step per chain") {
    testsup::TempDir dir;
    ExperimentConfig cfg = tiny_config(dir.file("out"));
    cfg.metropolis_total_steps = 0;  // derive from the reference
    const std::uint64_t reference = 9001;
    const MetropolisExperimentResult res = run_metropolis_experiment(cfg, reference);
    const std::uint64_t chains = cfg.runs * cfg.grid.points().size();
    CHECK(res.wl_reference_steps == reference);
    CHECK(res.counted_steps >= reference);
    CHECK(res.counted_steps < reference + chains);
    CHECK(res.per_chain_steps == cfg.metropolis_burn_in + (reference + chains - 1) / chains);
}

TEST_CASE("budget recovery without a reference or prior run fails loudly") {
    testsup::TempDir dir;
    ExperimentConfig cfg = tiny_config(dir.file("out"));
    cfg.metropolis_total_steps = 0;
    const std::string msg =
        thrown_message<std::runtime_error>([&] { run_metropolis_experiment(cfg, 0); });
    CHECK(contains(msg, "no Wang-Landau step budget available"));
}

TEST_CASE("budget recovery reads the prior density run's manifest") {
    testsup::TempDir dir;
    ExperimentConfig cfg = tiny_config(dir.file("out"));
    const WlExperimentResult wl = run_wl_experiment(cfg);
    cfg.metropolis_total_steps = 0;
    const MetropolisExperimentResult res = run_metropolis_experiment(cfg, 0);
    CHECK(res.wl_reference_steps == wl.total_steps);
    CHECK(res.counted_steps >= wl.total_steps);
}

TEST_CASE("comparison runner emits curves, charts, and a summary") {
    testsup::TempDir dir;
    const ExperimentConfig cfg = tiny_config(dir.file("out"));
    run_compare_experiment(cfg);

    const std::string base = dir.file("out") + "/";
    for (const char* name :
         {"exact_curves.csv", "wl_curves.csv", "metropolis_curves.csv", "wl_error_curves.csv",
          "metropolis_error_curves.csv", "compare_summary.txt", "internal_energy.svg",
          "internal_energy_error.svg", "heat_capacity.svg", "heat_capacity_error.svg",
          "entropy.svg", "entropy_error.svg", "free_energy.svg", "free_energy_error.svg"})
        CHECK_MESSAGE(std::filesystem::exists(base + name), "missing ", name);

    const auto man = testsup::parse_manifest(base + "compare_manifest.txt");
    CHECK(man.at("status") == "complete");

    // Every row of the summary: method quantity rmse max_abs n_points.
    const auto summary = testsup::lines_of(testsup::read_file(base + "compare_summary.txt"));
    REQUIRE(summary.size() == 11);
    CHECK(contains(summary[0], "wl_total_steps = "));
    CHECK(contains(summary[1], "metropolis_counted_steps = "));
    int wl_rows = 0, metro_rows = 0;
    for (std::size_t i = 3; i < summary.size(); ++i) {
        std::istringstream row(summary[i]);
        std::string method, quantity;
        double rmse = -1.0, max_abs = -1.0;
        int n_points = 0;
        REQUIRE((row >> method >> quantity >> rmse >> max_abs >> n_points));
        CHECK(rmse >= 0.0);
        CHECK(max_abs >= rmse * 0.999999);
        CHECK(n_points == int(cfg.grid.points().size()));
        if (method == "wl") ++wl_rows;
        if (method == "metropolis") ++metro_rows;
    }
    CHECK(wl_rows == 4);
    CHECK(metro_rows == 4);

    // Charts are standalone SVG with plotted lines and a legend per series.
    const std::string svg = testsup::read_file(base + "internal_energy.svg");
    CHECK(contains(svg, "<svg"));
    CHECK(contains(svg, "polyline"));
    for (const char* label : {"exact", "wang-landau", "metropolis"})
        CHECK_MESSAGE(contains(svg, label), "legend label ", label);
    const std::string err_svg = testsup::read_file(base + "entropy_error.svg");
    CHECK(contains(err_svg, "wang-landau"));
    CHECK_FALSE(contains(err_svg, ">exact<"));
}

TEST_CASE("validation battery passes on the default model") {
    ExperimentConfig cfg;
    cfg.output_dir = "unused";
    std::ostringstream out;
    const int failures = run_validation_battery(cfg, out);
    CHECK(failures == 0);
    const std::string text = out.str();
    CHECK(contains(text, "ok   hamiltonian_trace_zero"));
    CHECK(contains(text, "ok   tier_outcome_agreement"));
    CHECK(contains(text, "checks_failed = 0"));
    CHECK_FALSE(contains(text, "FAIL"));
}

}  // TEST_SUITE
