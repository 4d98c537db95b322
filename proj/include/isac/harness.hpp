// SPDX-License-Identifier: Apache-2.0
//
// harness.hpp - experiment orchestration: beampattern comparison, power
// sweeps, timing comparison and Monte-Carlo audits, with CSV emission.
//
// Output contract: identical configuration + seed produce byte-identical
// CSV on the same platform (the timing experiment's measured columns are
// inherently machine-dependent). The CSV metadata block carries only the
// stable fields: scenario hash, seed, solver options, artifact version.

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "isac/solver_sdr.hpp"

namespace isac {

extern const char* const kArtifactVersion;

struct ExperimentResult {
    std::string kind;    // beampattern | power_sweep | timing | monte_carlo
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> columns;    // equal length; NaN = missing
    std::vector<std::pair<std::string, std::string>> metadata;    // emission order
    std::vector<std::string> errors;    // per-design/per-cell failure notes
    double wall_clock_s = 0.0;          // not serialized

    std::size_t n_rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

/// Solve both designs on one channel draw and tabulate their peak-normalized
/// beampatterns over the grid. A failed design yields an all-missing column
/// and a note in `errors`.
ExperimentResult run_beampattern(const ScenarioConfig& cfg,
                                 const std::vector<double>& grid_deg,
                                 const SolverOptions& opts = {});

/// Average MI of both designs over n_trials channel draws, per power level
/// and antenna count. Per-cell failures are counted and the run continues.
/// Channel draws are common across power levels (seed + trial index).
ExperimentResult run_power_sweep(const ScenarioConfig& cfg,
                                 const std::vector<double>& p0_grid_dbm,
                                 const std::vector<int>& antenna_list,
                                 int n_trials,
                                 const SolverOptions& opts = {});

/// Median wall-clock of the closed form vs. the SDR pipeline on the same
/// gamma = 0 instance, after 3 warmup runs. Requires n_repeats >= 10.
ExperimentResult run_timing(const ScenarioConfig& cfg, int n_repeats,
                            const SolverOptions& opts = {});

/// Per-trial records of both designs: MI, achieved rate, transmit power,
/// eigenvalue ratio and iteration count, plus summary quantiles.
ExperimentResult run_monte_carlo(const ScenarioConfig& cfg, int n_trials,
                                 const SolverOptions& opts = {});

void write_csv(const ExperimentResult& result, std::ostream& out);
std::string csv_string(const ExperimentResult& result);

/// Human-readable quantile summary for the --summary flag.
std::string summary_text(const ExperimentResult& result);

/// "lo:step:hi" -> inclusive grid; throws ArgumentError on malformed input.
std::vector<double> parse_grid(const std::string& spec);

} // namespace isac
