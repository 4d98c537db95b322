// SPDX-License-Identifier: Apache-2.0
//
// test_support.hpp - shared helpers for the test and acceptance suites:
// deterministic random instances, a brute-force 2-D subspace oracle for the
// interference-free design, and feasible-beamformer generators.
//
// The oracle here is intentionally independent of the closed-form solver:
// it parameterizes w = sqrt(P0) (alpha1 hhat + alpha2 e2) on the full-power
// manifold (|alpha1|^2 + alpha2^2 = 1, |alpha1|^2 >= t) and grid-refines.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "isac/metrics.hpp"
#include "isac/scenario.hpp"
#include "isac/solver_closed_form.hpp"

namespace isac::testsupport {

inline double urand(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int irand(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline CVector random_cvector(std::mt19937_64& rng, std::size_t n) {
    CVector v(n);
    for (cd& z : v) z = cd(urand(rng, -1, 1), urand(rng, -1, 1));
    return v;
}

inline CVector random_unit(std::mt19937_64& rng, std::size_t n) {
    CVector v = random_cvector(rng, n);
    const double s = 1.0 / norm(v);
    for (cd& z : v) z *= s;
    return v;
}

/// Random small configuration for the algebraic-reduction chain:
/// L in {2, 4}, N_T, N_R in {2, 3}, moderate powers and echo strengths.
inline ScenarioConfig random_small_cfg(std::mt19937_64& rng) {
    ScenarioConfig cfg;
    cfg.n_tx = irand(rng, 2, 3);
    cfg.n_rx = irand(rng, 2, 3);
    cfg.frame_len = irand(rng, 0, 1) == 0 ? 2 : 4;
    cfg.target_angle_deg = urand(rng, -90, 90);
    cfg.interferer_angle_deg = urand(rng, -90, 90);
    cfg.beta = urand(rng, 0, 2);
    cfg.gamma = irand(rng, 0, 9) == 0 ? 0.0 : urand(rng, 0, 2);
    cfg.p0_dbm = urand(rng, 30, 40);
    cfg.sigma_z_dbm = urand(rng, 27, 33);
    return cfg;
}

/// Beamformer with |w|^2 <= P0 (uniform direction, random power fraction).
inline Beamformer random_power_bf(std::mt19937_64& rng, const ScenarioConfig& cfg) {
    CVector w = random_unit(rng, static_cast<std::size_t>(cfg.n_tx));
    const double sc = std::sqrt(urand(rng, 0.05, 1.0) * cfg.p0_watts());
    for (cd& z : w) z *= sc;
    return make_beamformer(std::move(w), nullptr, 1.0);
}

/// Random beamformer satisfying both the power cap and the rate floor.
/// Rate-violating draws are blended toward the matched-channel direction.
inline Beamformer random_feasible_bf(std::mt19937_64& rng, const CVector& h,
                                     const ScenarioConfig& cfg) {
    const double p0 = cfg.p0_watts();
    const double omega = cfg.rate_floor_omega();
    CVector u = random_unit(rng, h.size());
    for (cd& z : u) z *= std::sqrt(p0);

    if (omega > 0.0 && std::norm(cdot(h, u)) < omega) {
        const double nh = norm(h);
        const cd hu = cdot(h, u);
        const cd phase = std::abs(hu) > 0.0 ? hu / std::abs(hu) : cd(1, 0);
        double lo = 0.0, hi = 1.0;
        CVector best;
        for (int it = 0; it < 60; ++it) {
            const double k = 0.5 * (lo + hi);
            CVector cand(u.size());
            for (std::size_t i = 0; i < u.size(); ++i)
                cand[i] = (1.0 - k) * u[i] / std::sqrt(p0) + k * phase * h[i] / nh;
            const double cn = norm(cand);
            for (cd& z : cand) z *= std::sqrt(p0) / cn;
            if (std::norm(cdot(h, cand)) >= omega) {
                best = cand;
                hi = k;
            } else {
                lo = k;
            }
        }
        if (best.empty()) {
            best.resize(h.size());
            const double sc = std::sqrt(p0) / nh;
            for (std::size_t i = 0; i < h.size(); ++i) best[i] = phase * sc * h[i];
        }
        u = best;
    }

    // sometimes back the power off while keeping the rate feasible
    if (irand(rng, 0, 1) == 0) {
        const double hu2 = std::norm(cdot(h, u));
        const double cmin = (omega > 0.0 && hu2 > 0.0)
                                ? std::min(1.0, std::sqrt(omega / hu2))
                                : 0.2;
        const double c = urand(rng, cmin, 1.0);
        for (cd& z : u) z *= c;
    }
    return make_beamformer(std::move(u), &h, cfg.sigma_n_sq());
}

/// Independent oracle for the interference-free objective |a^H w|^2:
/// exhaustive grid refinement over the 2-D constraint manifold in
/// span{h, a}. Returns the maximal objective value.
inline double oracle_subspace_max(const CVector& h, const ScenarioConfig& cfg) {
    const double p0 = cfg.p0_watts();
    const CVector a = steering_vector(cfg.target_angle_deg, cfg.n_tx, cfg.spacing_tx);
    const Feasibility feas = feasibility(h, cfg);
    const double t = feas.t_load;

    const double nh = norm(h);
    if (nh == 0.0) return p0 * norm_sq(a);    // rate vacuous, radar MRT

    CVector hhat(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) hhat[i] = h[i] / nh;

    // orthonormal completion of hhat inside span{h, a}
    const cd proj = cdot(hhat, a);
    CVector e2(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) e2[i] = a[i] - proj * hhat[i];
    const double e2n = norm(e2);

    const cd av1 = cdot(a, hhat);    // a^H hhat
    if (e2n < 1e-12) {
        // channel parallel to the steering vector: 1-D manifold, s = 1 best
        return p0 * std::norm(av1);
    }
    for (cd& z : e2) z /= e2n;
    const cd av2 = cdot(a, e2);

    auto objective = [&](double s, double phi) {
        const cd alpha1 = std::polar(std::sqrt(s), phi);
        const double alpha2 = std::sqrt(std::max(0.0, 1.0 - s));
        return p0 * std::norm(alpha1 * av1 + alpha2 * av2);
    };

    double lo_s = std::min(t, 1.0), hi_s = 1.0;
    double lo_p = 0.0, hi_p = 2.0 * std::numbers::pi;
    double best = -1.0, best_s = lo_s, best_p = 0.0;
    const int npts = 48;
    for (int round = 0; round < 6; ++round) {
        for (int i = 0; i <= npts; ++i) {
            const double s = lo_s + (hi_s - lo_s) * i / npts;
            for (int j = 0; j <= npts; ++j) {
                const double phi = lo_p + (hi_p - lo_p) * j / npts;
                const double f = objective(s, phi);
                if (f > best) {
                    best = f;
                    best_s = s;
                    best_p = phi;
                }
            }
        }
        const double ds = 2.0 * (hi_s - lo_s) / npts;
        const double dp = 2.0 * (hi_p - lo_p) / npts;
        lo_s = std::max(std::min(t, 1.0), best_s - ds);
        hi_s = std::min(1.0, best_s + ds);
        lo_p = best_p - dp;
        hi_p = best_p + dp;
    }
    return best;
}

} // namespace isac::testsupport
