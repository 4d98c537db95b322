// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isac/ipm.hpp"
#include "isac/solver_closed_form.hpp"
#include "isac/solver_sdr.hpp"
#include "test_support.hpp"

using namespace isac;
namespace ts = isac::testsupport;

namespace {

std::mt19937_64 rng(31337);

double rate_for_omega(double omega, const ScenarioConfig& cfg) {
    return std::log2(1.0 + omega / cfg.sigma_n_sq());
}

} // namespace

TEST_CASE("ipm: scalar bound") {
    // max y s.t. 3 - y >= 0
    ipm::Problem p;
    p.dims = {1};
    p.f0 = {{{0, 0, 3.0}}};
    p.constraints = {{{{0, 0, -1.0}}}};
    p.b = {1.0};
    ipm::Result r = ipm::solve(p);
    REQUIRE(r.converged);
    CHECK(r.y[0] == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("ipm: largest eigenvalue as an SDP") {
    // min t s.t. t I - A >= 0, posed as max(-t)
    const std::size_t n = 5;
    CMatrix tmp(n, n);
    std::mt19937_64 local(99);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = ts::urand(local, -1, 1);
            tmp(i, j) = v;
            tmp(j, i) = v;
        }
    RMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = tmp(i, j).real();

    ipm::Problem p;
    p.dims = {static_cast<int>(n)};
    p.f0.resize(1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (a(i, j) != 0.0)
                p.f0[0].push_back({static_cast<int>(i), static_cast<int>(j), -a(i, j)});
    p.constraints.resize(1);
    p.constraints[0].resize(1);
    for (std::size_t i = 0; i < n; ++i)
        p.constraints[0][0].push_back({static_cast<int>(i), static_cast<int>(i), 1.0});
    p.b = {-1.0};

    ipm::Result r = ipm::solve(p);
    REQUIRE(r.converged);
    const double lam_max = sym_eig(a).eigenvalues.front();
    CHECK(r.y[0] == doctest::Approx(lam_max).epsilon(1e-6));
}

TEST_CASE("build_sdp: trace-form coefficients against independent assembly") {
    ScenarioConfig cfg;
    CVector h = ts::random_cvector(rng, 6);
    SdpProblem prob = build_sdp(h, cfg);

    const CVector a1 = steering_vector(cfg.target_angle_deg, cfg.n_tx, cfg.spacing_tx);
    const CVector a2 = steering_vector(cfg.interferer_angle_deg, cfg.n_tx, cfg.spacing_tx);
    const double l = cfg.frame_len;

    // Tr(c_pp W) must equal L b^2 N_R a1^H W a1 (the identity sdr_objective uses)
    for (int t = 0; t < 5; ++t) {
        CVector v = ts::random_cvector(rng, 6);
        CMatrix w = CMatrix::outer(v, v);
        const double lhs = (prob.c_pp * w).trace().real();
        const double rhs = l * cfg.beta * cfg.beta * cfg.n_rx * quad_form(w, a1);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        const double lhs_q = (prob.c_qq * w).trace().real();
        const double rhs_q = l * cfg.gamma * cfg.gamma * cfg.n_rx * quad_form(w, a2);
        CHECK(lhs_q == doctest::Approx(rhs_q).epsilon(1e-12));
    }

    // off-diagonal pair are conjugate transposes
    CHECK((prob.c_qp - prob.c_pq.adjoint()).frobenius_norm() <=
          1e-12 * std::max(1.0, prob.c_qp.frobenius_norm()));

    ScenarioConfig no_gamma = cfg;
    no_gamma.gamma = 0.0;
    SdpProblem p0 = build_sdp(h, no_gamma);
    CHECK(p0.c_qp.frobenius_norm() == 0.0);
    CHECK(p0.c_qq.frobenius_norm() == 0.0);

    ScenarioConfig hard = cfg;
    hard.rate_threshold_bps = 30.0;    // omega ~ 1e8 W, far beyond P0 |h|^2
    CHECK_THROWS_AS(build_sdp(h, hard), InfeasibleError);
}

TEST_CASE("solve_sdp: analytic optimum in the no-interference, no-rate limit") {
    ScenarioConfig cfg;
    cfg.gamma = 0.0;
    cfg.rate_threshold_bps = 0.0;
    CVector h = ts::random_cvector(rng, 6);
    SdpSolution sol = solve_sdp(build_sdp(h, cfg));
    const double expect = cfg.frame_len * cfg.n_rx * cfg.p0_watts() * cfg.n_tx +
                          cfg.sigma_z_sq();
    CHECK(sol.t_star == doctest::Approx(expect).epsilon(1e-6));
    CHECK(sol.eig_ratio <= 1e-6);

    ScenarioConfig nobeta;
    nobeta.beta = 0.0;
    SdpSolution sol0 = solve_sdp(build_sdp(h, nobeta));
    CHECK(sol0.t_star == doctest::Approx(nobeta.sigma_z_sq()).epsilon(1e-6));
}

TEST_CASE("solve_sdp: solution invariants on the default scenario") {
    ScenarioConfig cfg;
    GaussianSampler ch(cfg.channel_seed);
    CVector h = sample_rayleigh_channel(cfg, ch);
    SdpProblem prob = build_sdp(h, cfg);
    SdpSolution sol = solve_sdp(prob);
    REQUIRE(sol.converged);
    CHECK(sol.duality_gap <= 1e-7);

    SdpResiduals res = solution_residuals(prob, sol);
    CHECK(res.w_min_eig >= -1e-8 * prob.power_cap);
    CHECK(res.trace_slack >= -1e-8 * prob.power_cap);
    CHECK(res.rate_slack >= -1e-8 * prob.rate_floor);
    CHECK(res.lmi_min_eig >= -1e-8 * res.lmi_scale);
}

TEST_CASE("solve_sdp: relaxation bound dominates every feasible beamformer") {
    ScenarioConfig cfg;
    GaussianSampler ch(17);
    CVector h = sample_rayleigh_channel(cfg, ch);
    SdpSolution sol = solve_sdp(build_sdp(h, cfg));
    const double bound = std::log(sol.t_star / cfg.sigma_z_sq());
    for (int t = 0; t < 200; ++t) {
        Beamformer bf = ts::random_feasible_bf(rng, h, cfg);
        CHECK(mi_with_interference(bf, cfg).nats <= bound + 1e-6);
    }
}

TEST_CASE("solve_sdp: t_star nondecreasing in transmit power") {
    ScenarioConfig cfg;
    GaussianSampler ch(5);
    CVector h = sample_rayleigh_channel(cfg, ch);
    double prev = -1.0;
    for (double p0 = 34.0; p0 <= 42.0; p0 += 2.0) {
        ScenarioConfig c = cfg;
        c.p0_dbm = p0;
        SdpSolution sol = solve_sdp(build_sdp(h, c));
        CHECK(sol.t_star >= prev * (1.0 - 1e-9));
        prev = sol.t_star;
    }
}

TEST_CASE("solve_sdp: coincident target and interferer angles") {
    ScenarioConfig cfg;
    cfg.interferer_angle_deg = cfg.target_angle_deg;
    cfg.gamma = cfg.beta;
    GaussianSampler ch(11);
    CVector h = sample_rayleigh_channel(cfg, ch);
    auto [bf, sol] = solve_with_interference(h, cfg);
    CHECK(sol.converged);

    ScenarioConfig clean = cfg;
    clean.gamma = 0.0;
    auto [bf0, diag] = solve_no_interference(h, clean);
    CHECK(mi_with_interference(bf, cfg).nats < mi_no_interference(bf0, clean).nats);
}

TEST_CASE("solve_sdp: argmax direction invariant to joint echo-strength scaling") {
    ScenarioConfig cfg;
    cfg.rate_threshold_bps = 0.0;    // invariance is exact only without the rate coupling
    GaussianSampler ch(23);
    CVector h = sample_rayleigh_channel(cfg, ch);

    SdpSolution base = solve_sdp(build_sdp(h, cfg));
    ScenarioConfig scaled = cfg;
    scaled.beta *= 3.0;
    scaled.gamma *= 3.0;
    SdpSolution sc = solve_sdp(build_sdp(h, scaled));

    const HermEig e1 = herm_eig(base.w_mat);
    const HermEig e2 = herm_eig(sc.w_mat);
    CVector v1(e1.eigenvectors.rows()), v2(e2.eigenvectors.rows());
    for (std::size_t i = 0; i < v1.size(); ++i) {
        v1[i] = e1.eigenvectors(i, 0);
        v2[i] = e2.eigenvectors(i, 0);
    }
    CHECK(std::abs(cdot(v1, v2)) >= 1.0 - 1e-6);
}

TEST_CASE("extract_rank_one: principal eigenpair fast path and degenerate W") {
    ScenarioConfig cfg;
    const double p0 = cfg.p0_watts();
    const CVector a = steering_vector(cfg.target_angle_deg, cfg.n_tx, cfg.spacing_tx);
    CVector ahat = a;
    for (cd& z : ahat) z /= norm(a);

    GaussianSampler ch(3);
    CVector h = sample_rayleigh_channel(cfg, ch);

    ScenarioConfig free_rate = cfg;
    free_rate.rate_threshold_bps = 0.0;

    SdpSolution rank1;
    rank1.w_mat = p0 * CMatrix::outer(ahat, ahat);
    rank1.t_star = 0.0;
    rank1.eig_ratio = 0.0;
    rank1.converged = true;
    Beamformer w1 = extract_rank_one(rank1, h, free_rate, 1000);
    CHECK(norm_sq(w1.w) == doctest::Approx(p0).epsilon(1e-12));
    const double align = std::abs(cdot(w1.w, a)) / (norm(w1.w) * norm(a));
    CHECK(align == doctest::Approx(1.0).epsilon(1e-10));

    SdpSolution iso;
    iso.w_mat = (p0 / cfg.n_tx) * CMatrix::identity(cfg.n_tx);
    iso.eig_ratio = 1.0;
    iso.converged = true;
    Beamformer wi = extract_rank_one(iso, h, free_rate, 200);
    CHECK(norm_sq(wi.w) == doctest::Approx(p0).epsilon(1e-12));
}

TEST_CASE("solve_with_interference: gamma = 0 recovers the closed form") {
    for (int trial = 0; trial < 8; ++trial) {
        ScenarioConfig cfg;
        cfg.gamma = 0.0;
        cfg.target_angle_deg = ts::urand(rng, -50, 50);
        CVector h = ts::random_cvector(rng, 6);
        const double t = ts::urand(rng, 0.05, 0.9);
        cfg.rate_threshold_bps =
            rate_for_omega(t * cfg.p0_watts() * norm_sq(h), cfg);

        auto [w_cf, diag] = solve_no_interference(h, cfg);
        auto [w_sdr, sol] = solve_with_interference(h, cfg);
        const double mi_cf = mi_no_interference(w_cf, cfg).nats;
        const double mi_sdr = mi_no_interference(w_sdr, cfg).nats;
        CHECK(std::abs(mi_cf - mi_sdr) <= 1e-4 * std::max(1.0, mi_cf));
    }
}

TEST_CASE("solve_with_interference: extraction reaches the relaxation bound") {
    ScenarioConfig cfg;
    GaussianSampler ch(cfg.channel_seed);
    CVector h = sample_rayleigh_channel(cfg, ch);
    auto [bf, sol] = solve_with_interference(h, cfg);
    const double bound = std::log(sol.t_star / cfg.sigma_z_sq());
    const double mi = mi_with_interference(bf, cfg).nats;
    // the reported bound itself carries the solver's gap tolerance
    CHECK(mi <= bound + 1e-6);
    CHECK(bound - mi <= 1e-3);
    CHECK(bf.achieved_rate >= cfg.rate_threshold_bps - 1e-6);
    CHECK(norm_sq(bf.w) == doctest::Approx(cfg.p0_watts()).epsilon(1e-9));
}
