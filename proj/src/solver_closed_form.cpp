// SPDX-License-Identifier: Apache-2.0

#include "isac/solver_closed_form.hpp"

#include <cmath>
#include <limits>

namespace isac {

const char* to_string(ClosedFormCase c) {
    switch (c) {
        case ClosedFormCase::mrt_radar: return "mrt_radar";
        case ClosedFormCase::mrt_comm: return "mrt_comm";
        case ClosedFormCase::blend: return "blend";
        case ClosedFormCase::infeasible: return "infeasible";
    }
    return "?";
}

Feasibility feasibility(const CVector& h, const ScenarioConfig& cfg) {
    cfg.validate();
    const double omega = cfg.rate_floor_omega();
    if (omega == 0.0) return {true, 0.0};
    const double nh2 = norm_sq(h);
    if (nh2 == 0.0) return {false, std::numeric_limits<double>::infinity()};
    const double t = omega / (cfg.p0_watts() * nh2);
    return {t <= 1.0, t};
}

std::pair<Beamformer, ClosedFormDiagnostics>
solve_no_interference(const CVector& h, const ScenarioConfig& cfg) {
    cfg.validate();
    if (h.size() != static_cast<std::size_t>(cfg.n_tx))
        throw DimensionError("solve_no_interference: h must have length n_tx");

    const Feasibility feas = feasibility(h, cfg);
    if (!feas.feasible)
        throw InfeasibleError("rate demand exceeds the Cauchy-Schwarz power bound", feas.t_load);

    const double p0 = cfg.p0_watts();
    const double omega = cfg.rate_floor_omega();
    const CVector a = steering_vector(cfg.target_angle_deg, cfg.n_tx, cfg.spacing_tx);
    const double na2 = norm_sq(a);
    const double nh2 = norm_sq(h);
    const cd ha = cdot(h, a);    // h^H a == a^T conj(h)

    ClosedFormDiagnostics diag;
    diag.t_load = feas.t_load;
    diag.corr = nh2 > 0.0 ? std::min(std::abs(ha) / std::sqrt(na2 * nh2), 1.0) : 0.0;

    CVector w(a.size());

    // Case precedence: radar MRT first; boundary equality keeps the MRT
    // solution (feasible with the rate constraint exactly active).
    if (std::norm(ha) >= omega * na2 / p0) {
        diag.case_taken = ClosedFormCase::mrt_radar;
        const double sc = std::sqrt(p0 / na2);
        for (std::size_t i = 0; i < a.size(); ++i) w[i] = sc * a[i];
    } else if (std::abs(diag.corr - 1.0) < 1e-9) {
        diag.case_taken = ClosedFormCase::mrt_comm;
        const double sc = std::sqrt(p0 / nh2);
        for (std::size_t i = 0; i < h.size(); ++i) w[i] = sc * h[i];
    } else {
        diag.case_taken = ClosedFormCase::blend;
        const double t = diag.t_load;
        const double r = diag.corr;
        const double one_minus_r2 = std::max(1.0 - r * r, 1e-15);
        diag.u2 = std::sqrt(std::max(1.0 - t, 0.0) / one_minus_r2);
        diag.z2 = std::sqrt(p0 * std::max(1.0 - t, 0.0) / one_minus_r2);
        // phase factor a^T conj(h) / |a^H h|; any unit phase is optimal when
        // the channel is orthogonal to the steering vector
        const cd phase = std::abs(ha) > 0.0 ? ha / std::abs(ha) : cd(1.0, 0.0);
        diag.z1 = std::sqrt(p0) * (std::sqrt(t) - diag.u2 * r) * phase;

        const double ih = 1.0 / std::sqrt(nh2);
        const double ia = 1.0 / std::sqrt(na2);
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = diag.z1 * ih * h[i] + diag.z2 * ia * a[i];
    }

    Beamformer bf = make_beamformer(std::move(w), &h, cfg.sigma_n_sq());
    return {std::move(bf), diag};
}

} // namespace isac
