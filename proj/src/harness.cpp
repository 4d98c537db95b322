// SPDX-License-Identifier: Apache-2.0

#include "isac/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "isac/metrics.hpp"
#include "isac/solver_closed_form.hpp"

namespace isac {

const char* const kArtifactVersion = "0.1.0";

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string solver_string(const SolverOptions& o) {
    std::ostringstream s;
    s << "tol=" << fmt(o.tol) << " feas_tol=" << fmt(o.feas_tol)
      << " max_iters=" << o.max_iters << " step_frac=" << fmt(o.step_frac)
      << " n_rand=" << o.n_rand << " rank_one_ratio=" << fmt(o.rank_one_ratio);
    return s.str();
}

void stamp_metadata(ExperimentResult& r, const ScenarioConfig& cfg,
                    const SolverOptions& opts) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "0x%016llx",
                  static_cast<unsigned long long>(scenario_hash(cfg)));
    r.metadata.emplace_back("scenario_hash", hash);
    r.metadata.emplace_back("seed", std::to_string(cfg.channel_seed));
    r.metadata.emplace_back("solver", solver_string(opts));
    r.metadata.emplace_back("version", kArtifactVersion);
}

double quantile(std::vector<double> v, double q) {
    v.erase(std::remove_if(v.begin(), v.end(),
                           [](double x) { return std::isnan(x); }),
            v.end());
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const double pos = q * (v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

} // namespace

ExperimentResult run_beampattern(const ScenarioConfig& cfg,
                                 const std::vector<double>& grid_deg,
                                 const SolverOptions& opts) {
    cfg.validate();
    if (grid_deg.empty()) throw ArgumentError("run_beampattern: empty angle grid");
    const auto t0 = Clock::now();

    GaussianSampler rng(cfg.channel_seed);
    const CVector h = sample_rayleigh_channel(cfg, rng);
    const std::vector<double> nan_col(grid_deg.size(), std::nan(""));

    ExperimentResult r;
    r.kind = "beampattern";
    r.column_names = {"angle_deg", "gain_db_wo_inter", "gain_db_w_inter"};
    r.columns.resize(3, nan_col);
    r.columns[0] = grid_deg;

    std::string mi_wo = "", mi_w = "";
    try {
        auto [bf, diag] = solve_no_interference(h, cfg);
        r.columns[1] = beampattern_db(bf, grid_deg, cfg);
        mi_wo = fmt(mi_no_interference(bf, cfg).nats);
    } catch (const Error& e) {
        r.errors.push_back(std::string("wo_inter: ") + e.what());
    }
    try {
        auto [bf, sol] = solve_with_interference(h, cfg, opts);
        r.columns[2] = beampattern_db(bf, grid_deg, cfg);
        mi_w = fmt(mi_with_interference(bf, cfg).nats);
    } catch (const Error& e) {
        r.errors.push_back(std::string("w_inter: ") + e.what());
    }

    r.metadata.emplace_back("kind", r.kind);
    stamp_metadata(r, cfg, opts);
    if (!mi_wo.empty()) r.metadata.emplace_back("mi_wo_inter_nats", mi_wo);
    if (!mi_w.empty()) r.metadata.emplace_back("mi_w_inter_nats", mi_w);
    for (const std::string& e : r.errors) r.metadata.emplace_back("error", e);
    r.wall_clock_s = seconds_since(t0);
    return r;
}

ExperimentResult run_power_sweep(const ScenarioConfig& cfg,
                                 const std::vector<double>& p0_grid_dbm,
                                 const std::vector<int>& antenna_list,
                                 int n_trials,
                                 const SolverOptions& opts) {
    cfg.validate();
    if (n_trials < 1) throw ArgumentError("run_power_sweep: n_trials must be >= 1");
    if (p0_grid_dbm.empty() || antenna_list.empty())
        throw ArgumentError("run_power_sweep: empty grid");
    const auto t0 = Clock::now();

    ExperimentResult r;
    r.kind = "power_sweep";
    r.column_names = {"p0_dbm"};
    for (int n : antenna_list) {
        r.column_names.push_back("mi_wo_n" + std::to_string(n) + "_nats");
        r.column_names.push_back("mi_w_n" + std::to_string(n) + "_nats");
        r.column_names.push_back("fail_wo_n" + std::to_string(n));
        r.column_names.push_back("fail_w_n" + std::to_string(n));
    }
    r.columns.assign(r.column_names.size(), {});
    r.columns[0] = p0_grid_dbm;

    for (std::size_t ai = 0; ai < antenna_list.size(); ++ai) {
        const int n = antenna_list[ai];
        for (double p0 : p0_grid_dbm) {
            ScenarioConfig c = cfg;
            c.n_tx = n;
            c.n_rx = n;
            c.p0_dbm = p0;

            double sum_wo = 0.0, sum_w = 0.0;
            int ok_wo = 0, ok_w = 0, fail_wo = 0, fail_w = 0;
            for (int trial = 0; trial < n_trials; ++trial) {
                GaussianSampler rng(c.channel_seed + static_cast<std::uint64_t>(trial));
                const CVector h = sample_rayleigh_channel(c, rng);
                try {
                    auto [bf, diag] = solve_no_interference(h, c);
                    sum_wo += mi_no_interference(bf, c).nats;
                    ++ok_wo;
                } catch (const Error& e) {
                    ++fail_wo;
                    r.errors.push_back("wo n=" + std::to_string(n) + " p0=" + fmt(p0) +
                                       " trial=" + std::to_string(trial) + ": " + e.what());
                }
                try {
                    auto [bf, sol] = solve_with_interference(h, c, opts);
                    sum_w += mi_with_interference(bf, c).nats;
                    ++ok_w;
                } catch (const Error& e) {
                    ++fail_w;
                    r.errors.push_back("w n=" + std::to_string(n) + " p0=" + fmt(p0) +
                                       " trial=" + std::to_string(trial) + ": " + e.what());
                }
            }
            r.columns[1 + 4 * ai].push_back(ok_wo > 0 ? sum_wo / ok_wo : std::nan(""));
            r.columns[2 + 4 * ai].push_back(ok_w > 0 ? sum_w / ok_w : std::nan(""));
            r.columns[3 + 4 * ai].push_back(fail_wo);
            r.columns[4 + 4 * ai].push_back(fail_w);
        }
    }

    r.metadata.emplace_back("kind", r.kind);
    stamp_metadata(r, cfg, opts);
    r.metadata.emplace_back("n_trials", std::to_string(n_trials));
    r.wall_clock_s = seconds_since(t0);
    return r;
}

ExperimentResult run_timing(const ScenarioConfig& cfg, int n_repeats,
                            const SolverOptions& opts) {
    cfg.validate();
    if (n_repeats < 10) throw ArgumentError("run_timing: n_repeats must be >= 10");
    const auto t0 = Clock::now();

    ScenarioConfig clean = cfg;
    clean.gamma = 0.0;    // the comparison is on the interference-free problem
    GaussianSampler rng(cfg.channel_seed);
    const CVector h = sample_rayleigh_channel(clean, rng);

    auto closed_once = [&]() {
        auto [bf, diag] = solve_no_interference(h, clean);
        return mi_no_interference(bf, clean).nats;
    };
    auto sdr_once = [&]() {
        auto [bf, sol] = solve_with_interference(h, clean, opts);
        return mi_no_interference(bf, clean).nats;
    };

    for (int i = 0; i < 3; ++i) {
        closed_once();
        sdr_once();
    }

    ExperimentResult r;
    r.kind = "timing";
    r.column_names = {"repeat", "t_closed_s", "t_sdr_s", "mi_closed_nats", "mi_sdr_nats"};
    r.columns.assign(5, {});
    std::vector<double> tc, ts;
    for (int i = 0; i < n_repeats; ++i) {
        const auto c0 = Clock::now();
        const double mi_c = closed_once();
        const double t_c = seconds_since(c0);
        const auto s0 = Clock::now();
        const double mi_s = sdr_once();
        const double t_s = seconds_since(s0);
        r.columns[0].push_back(i);
        r.columns[1].push_back(t_c);
        r.columns[2].push_back(t_s);
        r.columns[3].push_back(mi_c);
        r.columns[4].push_back(mi_s);
        tc.push_back(t_c);
        ts.push_back(t_s);
    }

    const double med_c = quantile(tc, 0.5);
    const double med_s = quantile(ts, 0.5);
    r.metadata.emplace_back("kind", r.kind);
    stamp_metadata(r, cfg, opts);
    r.metadata.emplace_back("median_closed_s", fmt(med_c));
    r.metadata.emplace_back("median_sdr_s", fmt(med_s));
    r.metadata.emplace_back("speedup", fmt(med_c > 0.0 ? med_s / med_c : INFINITY));
    r.wall_clock_s = seconds_since(t0);
    return r;
}

ExperimentResult run_monte_carlo(const ScenarioConfig& cfg, int n_trials,
                                 const SolverOptions& opts) {
    cfg.validate();
    if (n_trials < 1) throw ArgumentError("run_monte_carlo: n_trials must be >= 1");
    const auto t0 = Clock::now();

    ExperimentResult r;
    r.kind = "monte_carlo";
    r.column_names = {"trial",      "mi_wo_nats", "mi_w_nats", "rate_wo_bps",
                      "rate_w_bps", "power_wo_w", "power_w_w", "eig_ratio",
                      "iterations", "status"};
    r.columns.assign(r.column_names.size(), {});

    for (int trial = 0; trial < n_trials; ++trial) {
        GaussianSampler rng(cfg.channel_seed + static_cast<std::uint64_t>(trial));
        const CVector h = sample_rayleigh_channel(cfg, rng);
        double mi_wo = std::nan(""), mi_w = std::nan("");
        double rate_wo = std::nan(""), rate_w = std::nan("");
        double pow_wo = std::nan(""), pow_w = std::nan("");
        double ratio = std::nan(""), iters = std::nan("");
        int status = 0;
        try {
            auto [bf, diag] = solve_no_interference(h, cfg);
            mi_wo = mi_no_interference(bf, cfg).nats;
            rate_wo = bf.achieved_rate;
            pow_wo = bf.power;
        } catch (const Error& e) {
            status |= 1;
            r.errors.push_back("wo trial=" + std::to_string(trial) + ": " + e.what());
        }
        try {
            auto [bf, sol] = solve_with_interference(h, cfg, opts);
            mi_w = mi_with_interference(bf, cfg).nats;
            rate_w = bf.achieved_rate;
            pow_w = bf.power;
            ratio = sol.eig_ratio;
            iters = sol.iterations;
        } catch (const Error& e) {
            status |= 2;
            r.errors.push_back("w trial=" + std::to_string(trial) + ": " + e.what());
        }
        r.columns[0].push_back(trial);
        r.columns[1].push_back(mi_wo);
        r.columns[2].push_back(mi_w);
        r.columns[3].push_back(rate_wo);
        r.columns[4].push_back(rate_w);
        r.columns[5].push_back(pow_wo);
        r.columns[6].push_back(pow_w);
        r.columns[7].push_back(ratio);
        r.columns[8].push_back(iters);
        r.columns[9].push_back(status);
    }

    r.metadata.emplace_back("kind", r.kind);
    stamp_metadata(r, cfg, opts);
    r.metadata.emplace_back("n_trials", std::to_string(n_trials));
    for (const char* name : {"mi_wo_nats", "mi_w_nats", "eig_ratio"}) {
        const auto it = std::find(r.column_names.begin(), r.column_names.end(), name);
        const auto& col = r.columns[static_cast<std::size_t>(it - r.column_names.begin())];
        r.metadata.emplace_back(std::string(name) + "_q10", fmt(quantile(col, 0.1)));
        r.metadata.emplace_back(std::string(name) + "_q50", fmt(quantile(col, 0.5)));
        r.metadata.emplace_back(std::string(name) + "_q90", fmt(quantile(col, 0.9)));
    }
    r.wall_clock_s = seconds_since(t0);
    return r;
}

void write_csv(const ExperimentResult& result, std::ostream& out) {
    out << "# isac-csv v1\n";
    for (const auto& [k, v] : result.metadata) out << "# " << k << ": " << v << "\n";
    for (std::size_t j = 0; j < result.column_names.size(); ++j)
        out << result.column_names[j]
            << (j + 1 < result.column_names.size() ? "," : "\n");
    const std::size_t rows = result.n_rows();
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < result.columns.size(); ++j) {
            const double v = result.columns[j][i];
            if (!std::isnan(v)) out << fmt(v);
            out << (j + 1 < result.columns.size() ? "," : "\n");
        }
    }
}

std::string csv_string(const ExperimentResult& result) {
    std::ostringstream s;
    write_csv(result, s);
    return s.str();
}

std::string summary_text(const ExperimentResult& result) {
    std::ostringstream s;
    s << result.kind << ": " << result.n_rows() << " rows, wall clock "
      << fmt(result.wall_clock_s) << " s\n";
    for (std::size_t j = 1; j < result.columns.size(); ++j) {
        const auto& col = result.columns[j];
        s << "  " << result.column_names[j] << ": q10=" << fmt(quantile(col, 0.1))
          << " q50=" << fmt(quantile(col, 0.5)) << " q90=" << fmt(quantile(col, 0.9))
          << "\n";
    }
    if (!result.errors.empty())
        s << "  " << result.errors.size() << " recorded failure(s)\n";
    return s.str();
}

std::vector<double> parse_grid(const std::string& spec) {
    double lo = 0, step = 0, hi = 0;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &lo, &step, &hi, &extra) != 3 ||
        !(step > 0.0) || hi < lo)
        throw ArgumentError("grid spec must be 'lo:step:hi' with step > 0: " + spec);
    std::vector<double> out;
    for (double v = lo; v <= hi + 1e-9 * step; v += step) out.push_back(v);
    return out;
}

} // namespace isac
