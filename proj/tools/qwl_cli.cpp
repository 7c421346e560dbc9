// Command-line front end. Talks to the toolkit exclusively through the C API.
#include <cstdint>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qwl/qwl_c.h"

namespace {

struct Options {
    std::string config;
    std::string out;
    std::string tier;
    std::uint64_t seed = 0;
    int runs = 0;
    std::vector<std::string> assignments;
};

void add_common_options(CLI::App* sub, Options& opts) {
    sub->add_option("-c,--config", opts.config, "Config file (flat section.key = value lines)");
    sub->add_option("-o,--out", opts.out, "Output directory (overrides run.output_dir)");
    sub->add_option("--seed", opts.seed, "Base seed (overrides run.base_seed)");
    sub->add_option("--tier", opts.tier,
                    "QPE tier: pair_statevector, eigen_statevector, or analytic");
    sub->add_option("--runs", opts.runs, "Independent runs (overrides run.count)");
    sub->add_option("--set", opts.assignments,
                    "Extra 'section.key=value' override; may repeat")
        ->take_all();
}

int fail(const std::string& command, qwl_status status, const qwl_experiment* exp) {
    std::cerr << command << ": error (" << qwl_status_name(status)
              << "): " << qwl_experiment_last_error(exp) << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Flat-histogram (Wang-Landau) sampling of the transverse-field Ising chain through "
        "simulated quantum phase estimation, with exact and Metropolis baselines"};
    app.set_version_flag("--version", std::string(qwl_version()));
    app.require_subcommand(0, 1);

    Options opts;
    CLI::App* exact =
        app.add_subcommand("exact", "Exact-diagonalization thermodynamics and spectrum fixture");
    CLI::App* wl = app.add_subcommand(
        "wl", "Wang-Landau density-of-states runs with thermodynamic post-processing");
    CLI::App* metropolis = app.add_subcommand(
        "metropolis", "Budget-matched fixed-temperature Metropolis baseline");
    CLI::App* compare =
        app.add_subcommand("compare", "Exact vs Wang-Landau vs Metropolis with error charts");
    CLI::App* validate = app.add_subcommand("validate", "Oracle-consistency check battery");
    for (CLI::App* sub : {exact, wl, metropolis, compare, validate})
        add_common_options(sub, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return 2;
    }

    std::string command;
    for (CLI::App* sub : {exact, wl, metropolis, compare, validate})
        if (sub->parsed()) command = sub->get_name();
    if (command.empty()) {
        std::cerr << app.help();
        return 2;
    }
    CLI::App* sub = app.get_subcommand(command);

    std::vector<std::pair<std::string, std::string>> overrides;
    if (sub->count("--seed") > 0) overrides.emplace_back("run.base_seed", std::to_string(opts.seed));
    if (sub->count("--out") > 0) overrides.emplace_back("run.output_dir", opts.out);
    if (sub->count("--tier") > 0) overrides.emplace_back("qpe.tier", opts.tier);
    if (sub->count("--runs") > 0) overrides.emplace_back("run.count", std::to_string(opts.runs));
    for (const std::string& assignment : opts.assignments) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == assignment.size()) {
            std::cerr << command << ": --set expects 'section.key=value', got '" << assignment
                      << "'\n";
            return 2;
        }
        overrides.emplace_back(assignment.substr(0, eq), assignment.substr(eq + 1));
    }

    qwl_experiment* exp = nullptr;
    qwl_status status =
        qwl_experiment_create(opts.config.empty() ? nullptr : opts.config.c_str(), &exp);
    if (status != QWL_OK) {
        const int code = fail(command, status, exp);
        qwl_experiment_destroy(exp);
        return code;
    }
    for (const auto& [key, value] : overrides) {
        status = qwl_experiment_set(exp, key.c_str(), value.c_str());
        if (status != QWL_OK) {
            const int code = fail(command, status, exp);
            qwl_experiment_destroy(exp);
            return code;
        }
    }

    int exit_code = 0;
    if (command == "validate") {
        int failed_checks = 0;
        status = qwl_experiment_validate(exp, &failed_checks);
        if (status != QWL_OK)
            exit_code = fail(command, status, exp);
        else
            exit_code = failed_checks > 0 ? 1 : 0;
    } else {
        if (command == "exact")
            status = qwl_experiment_run_exact(exp);
        else if (command == "wl")
            status = qwl_experiment_run_wl(exp);
        else if (command == "metropolis")
            status = qwl_experiment_run_metropolis(exp);
        else
            status = qwl_experiment_run_compare(exp);
        if (status != QWL_OK)
            exit_code = fail(command, status, exp);
        else
            std::cout << command << ": ok\n";
    }
    qwl_experiment_destroy(exp);
    return exit_code;
}
