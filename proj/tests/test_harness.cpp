// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "isac/cli.hpp"
#include "isac/harness.hpp"

using namespace isac;

namespace {

/// fast options for unit-level runs
SolverOptions quick() { return SolverOptions{}; }

ScenarioConfig small_cfg() {
    ScenarioConfig cfg;
    cfg.frame_len = 10;
    return cfg;
}

std::size_t col_index(const ExperimentResult& r, const std::string& name) {
    for (std::size_t j = 0; j < r.column_names.size(); ++j)
        if (r.column_names[j] == name) return j;
    throw std::runtime_error("missing column " + name);
}

int run_cli(std::initializer_list<const char*> args) {
    std::vector<const char*> argv = {"isac"};
    argv.insert(argv.end(), args.begin(), args.end());
    return cli_run(static_cast<int>(argv.size()), argv.data());
}

} // namespace

TEST_CASE("run_beampattern: singleton grid normalizes to 0 dB") {
    ExperimentResult r = run_beampattern(small_cfg(), {0.0}, quick());
    REQUIRE(r.n_rows() == 1);
    CHECK(r.errors.empty());
    CHECK(r.columns[1][0] == doctest::Approx(0.0));
    CHECK(r.columns[2][0] == doctest::Approx(0.0));
}

TEST_CASE("run_beampattern: deterministic CSV, schema intact") {
    std::vector<double> grid;
    for (double a = -90.0; a <= 90.0; a += 5.0) grid.push_back(a);
    const ScenarioConfig cfg = small_cfg();
    const std::string csv1 = csv_string(run_beampattern(cfg, grid, quick()));
    const std::string csv2 = csv_string(run_beampattern(cfg, grid, quick()));
    CHECK(csv1 == csv2);
    CHECK(csv1.find("# isac-csv v1") == 0);
    CHECK(csv1.find("# kind: beampattern") != std::string::npos);
    CHECK(csv1.find("# scenario_hash: 0x") != std::string::npos);
    CHECK(csv1.find("# seed: 1") != std::string::npos);
    CHECK(csv1.find("# solver: tol=") != std::string::npos);
    CHECK(csv1.find("# version: 0.1.0") != std::string::npos);
    CHECK(csv1.find("angle_deg,gain_db_wo_inter,gain_db_w_inter") != std::string::npos);

    ScenarioConfig other = cfg;
    other.channel_seed = 2;
    CHECK(csv_string(run_beampattern(other, grid, quick())) != csv1);
}

TEST_CASE("run_power_sweep: dominance and determinism on a tiny grid") {
    ScenarioConfig cfg = small_cfg();
    ExperimentResult r = run_power_sweep(cfg, {36.0, 40.0}, {4}, 2, quick());
    REQUIRE(r.n_rows() == 2);
    const auto wo = col_index(r, "mi_wo_n4_nats");
    const auto w = col_index(r, "mi_w_n4_nats");
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::isfinite(r.columns[wo][i]));
        CHECK(r.columns[wo][i] >= r.columns[w][i] - 1e-9);
    }
    CHECK(r.columns[wo][1] >= r.columns[wo][0]);

    const std::string again =
        csv_string(run_power_sweep(cfg, {36.0, 40.0}, {4}, 2, quick()));
    CHECK(again == csv_string(r));

    CHECK_THROWS_AS(run_power_sweep(cfg, {40.0}, {4}, 0, quick()), ArgumentError);
}

TEST_CASE("run_power_sweep: infeasible cells are recorded, run continues") {
    ScenarioConfig cfg = small_cfg();
    cfg.rate_threshold_bps = 6.0;
    // 0 dBm = 1 mW cannot carry 6 bps/Hz against 20 dBm noise
    ExperimentResult r = run_power_sweep(cfg, {0.0, 40.0}, {6}, 2, quick());
    const auto wo = col_index(r, "mi_wo_n6_nats");
    const auto fw = col_index(r, "fail_wo_n6");
    CHECK(std::isnan(r.columns[wo][0]));
    CHECK(r.columns[fw][0] == 2.0);
    CHECK(std::isfinite(r.columns[wo][1]));
    CHECK(r.columns[fw][1] == 0.0);
    CHECK_FALSE(r.errors.empty());
}

TEST_CASE("run_timing: repeat floor enforced, ratio sane") {
    ScenarioConfig cfg = small_cfg();
    CHECK_THROWS_AS(run_timing(cfg, 9, quick()), ArgumentError);

    ExperimentResult r = run_timing(cfg, 10, quick());
    REQUIRE(r.n_rows() == 10);
    double med_closed = 0, med_sdr = 0, speedup = 0;
    for (const auto& [k, v] : r.metadata) {
        if (k == "median_closed_s") med_closed = std::stod(v);
        if (k == "median_sdr_s") med_sdr = std::stod(v);
        if (k == "speedup") speedup = std::stod(v);
    }
    CHECK(med_sdr > med_closed);
    CHECK(speedup > 1.0);
    // cross-check: both paths agree on the MI they report
    for (std::size_t i = 0; i < r.n_rows(); ++i) {
        const double a = r.columns[3][i], b = r.columns[4][i];
        CHECK(std::abs(a - b) <= 1e-4 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("run_monte_carlo: audits on every trial") {
    ScenarioConfig cfg = small_cfg();
    ExperimentResult r = run_monte_carlo(cfg, 10, quick());
    REQUIRE(r.n_rows() == 10);
    const auto rate_wo = col_index(r, "rate_wo_bps");
    const auto rate_w = col_index(r, "rate_w_bps");
    const auto pow_wo = col_index(r, "power_wo_w");
    const auto status = col_index(r, "status");
    for (std::size_t i = 0; i < r.n_rows(); ++i) {
        CHECK(r.columns[status][i] == 0.0);
        CHECK(r.columns[rate_wo][i] >= cfg.rate_threshold_bps - 1e-6);
        CHECK(r.columns[rate_w][i] >= cfg.rate_threshold_bps - 1e-6);
        CHECK(std::abs(r.columns[pow_wo][i] - cfg.p0_watts()) <=
              1e-8 * cfg.p0_watts());
    }

    CHECK_THROWS_AS(run_monte_carlo(cfg, 0, quick()), ArgumentError);
}

TEST_CASE("parse_grid") {
    const std::vector<double> g = parse_grid("20:2:40");
    REQUIRE(g.size() == 11);
    CHECK(g.front() == 20.0);
    CHECK(g.back() == doctest::Approx(40.0));
    CHECK_THROWS_AS(parse_grid("20:0:40"), ArgumentError);
    CHECK_THROWS_AS(parse_grid("garbage"), ArgumentError);
    CHECK_THROWS_AS(parse_grid("40:2:20"), ArgumentError);
}

TEST_CASE("cli: end-to-end exit codes") {
    const std::string dir = "cli_test_tmp";
    std::remove((dir + ".scn").c_str());
    ScenarioConfig cfg = small_cfg();
    const std::string scn = dir + ".scn";
    const std::string out = dir + ".csv";
    save_scenario(cfg, scn);

    CHECK(run_cli({"beampattern", "--scenario", scn.c_str(), "--grid", "-90:5:90",
                   "--out", out.c_str()}) == 0);
    std::ifstream check(out);
    REQUIRE(check.good());
    std::string first;
    std::getline(check, first);
    CHECK(first == "# isac-csv v1");

    CHECK(run_cli({"monte-carlo", "--scenario", scn.c_str(), "--trials", "2",
                   "--out", out.c_str(), "--summary"}) == 0);

    // config errors exit 2
    CHECK(run_cli({"beampattern", "--scenario", "no_such_file.scn"}) == 2);
    CHECK(run_cli({"beampattern"}) == 2);                      // missing required option
    CHECK(run_cli({"sweep", "--scenario", scn.c_str(), "--powers", "bad"}) == 2);
    CHECK(run_cli({"timing", "--scenario", scn.c_str(), "--repeats", "3",
                   "--out", out.c_str()}) == 2);

    // infeasible rate demand surfaces as a solver failure for beampattern
    ScenarioConfig hard = cfg;
    hard.rate_threshold_bps = 30.0;
    const std::string hard_scn = dir + "_hard.scn";
    save_scenario(hard, hard_scn);
    CHECK(run_cli({"beampattern", "--scenario", hard_scn.c_str(), "--grid", "0:1:10",
                   "--out", out.c_str()}) == 1);

    std::remove(scn.c_str());
    std::remove(hard_scn.c_str());
    std::remove(out.c_str());
}
