// SPDX-License-Identifier: Apache-2.0

#include "isac/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "isac/harness.hpp"

namespace isac {

namespace {

struct CommonArgs {
    std::string scenario_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool summary = false;
    SolverOptions opts;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--scenario", args.scenario_path, "scenario file (key = value)")
        ->required();
    cmd->add_option("--out", args.out_path, "output CSV path (default: stdout)");
    cmd->add_option("--seed", args.seed, "override the scenario channel seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--tol", args.opts.tol, "interior-point relative gap tolerance");
    cmd->add_option("--max-iters", args.opts.max_iters, "interior-point iteration cap");
    cmd->add_option("--randomizations", args.opts.n_rand,
                    "Gaussian randomization candidate count");
    cmd->add_option("--rank-one-threshold", args.opts.rank_one_ratio,
                    "eigenvalue ratio below which W* counts as rank-one");
    cmd->add_flag("--summary", args.summary, "print quantile summary to stdout");
}

ScenarioConfig load(const CommonArgs& args) {
    ScenarioConfig cfg = load_scenario(args.scenario_path);
    if (args.seed_set) cfg.channel_seed = args.seed;
    return cfg;
}

int emit(const ExperimentResult& result, const CommonArgs& args, int fail_code) {
    if (args.out_path.empty()) {
        write_csv(result, std::cout);
    } else {
        std::ofstream out(args.out_path);
        if (!out) throw ConfigError("cannot write output file: " + args.out_path);
        write_csv(result, out);
    }
    if (args.summary) std::cout << summary_text(result);
    return result.errors.empty() ? 0 : fail_code;
}

} // namespace

int cli_run(int argc, const char* const* argv) {
    CLI::App app{"dual-function radar-communication beamformer design experiments"};
    app.require_subcommand(1);

    CommonArgs bp_args, sw_args, tm_args, mc_args;
    std::string bp_grid = "-90:0.5:90";
    std::string sw_powers = "20:2:40";
    std::vector<int> sw_antennas = {6, 12};
    int sw_trials = 50;
    int tm_repeats = 30;
    int mc_trials = 50;

    CLI::App* bp = app.add_subcommand("beampattern",
                                      "both designs' beampatterns on one channel draw");
    add_common(bp, bp_args);
    bp->add_option("--grid", bp_grid, "angle grid lo:step:hi in degrees");

    CLI::App* sw = app.add_subcommand("sweep", "average MI over a transmit-power grid");
    add_common(sw, sw_args);
    sw->add_option("--powers", sw_powers, "power grid lo:step:hi in dBm");
    sw->add_option("--antennas", sw_antennas, "antenna counts (n_tx = n_rx)");
    sw->add_option("--trials", sw_trials, "channel draws per grid point");

    CLI::App* tm = app.add_subcommand("timing",
                                      "closed form vs SDR pipeline wall-clock comparison");
    add_common(tm, tm_args);
    tm->add_option("--repeats", tm_repeats, "timed repeats (>= 10)");

    CLI::App* mc = app.add_subcommand("monte-carlo", "per-trial design audit records");
    add_common(mc, mc_args);
    mc->add_option("--trials", mc_trials, "number of channel draws");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);    // --help / --version
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (bp->parsed()) {
            const ExperimentResult r =
                run_beampattern(load(bp_args), parse_grid(bp_grid), bp_args.opts);
            return emit(r, bp_args, 1);
        }
        if (sw->parsed()) {
            const ExperimentResult r = run_power_sweep(
                load(sw_args), parse_grid(sw_powers), sw_antennas, sw_trials, sw_args.opts);
            // per-cell failures are data, not a run failure
            return emit(r, sw_args, 0);
        }
        if (tm->parsed()) {
            const ExperimentResult r = run_timing(load(tm_args), tm_repeats, tm_args.opts);
            return emit(r, tm_args, 1);
        }
        const ExperimentResult r = run_monte_carlo(load(mc_args), mc_trials, mc_args.opts);
        return emit(r, mc_args, 0);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ArgumentError& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace isac
