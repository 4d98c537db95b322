// SPDX-License-Identifier: Apache-2.0
//
// solver_sdr.hpp - the with-interference design path: lift w to W = w w^H,
// drop the rank constraint, solve the resulting SDP with the embedded
// interior-point method over the real symmetric embedding, and recover a
// feasible rank-one beamformer by eigen-extraction or Gaussian
// randomization.

#pragma once

#include <cstdint>
#include <utility>

#include "isac/metrics.hpp"
#include "isac/scenario.hpp"

namespace isac {

struct SolverOptions {
    double tol = 1e-7;             // relative duality gap
    double feas_tol = 1e-9;        // residual norms (scaled problem)
    int max_iters = 200;
    double step_frac = 0.98;
    int n_rand = 1000;             // Gaussian randomization candidates
    double rank_one_ratio = 1e-6;  // eigenvalue-ratio threshold for direct extraction
};

/// The lifted design problem: maximize the auxiliary variable t subject to
///   [[Tr(c_pp W) + s - t, Tr(c_qp W)], [Tr(c_pq W), Tr(c_qq W) + s]] >= 0,
///   Tr(W) <= P0,  Tr(h h^H W) >= Omega,  W >= 0,      s = sigma_z^2,
/// where c_pp = L b^2 PP^H, c_qp = L g b QP^H, c_pq = c_qp^H and
/// c_qq = L g^2 QQ^H.
struct SdpProblem {
    int dim = 0;             // N_T
    CMatrix c_pp, c_qp, c_pq, c_qq;
    double sigma_z_sq = 0.0;
    double power_cap = 0.0;        // P0, watts
    CMatrix rate_matrix;           // h h^H
    double rate_floor = 0.0;       // Omega, watts
};

struct SdpSolution {
    CMatrix w_mat;            // Hermitian PSD W
    double t_star = 0.0;      // optimal auxiliary variable
    double duality_gap = 0.0; // relative gap at termination
    int iterations = 0;
    double eig_ratio = 0.0;   // lambda_2 / lambda_1 of W (complex spectrum)
    bool converged = false;
};

/// Worst-case constraint residuals of a solution, for audits.
struct SdpResiduals {
    double w_min_eig = 0.0;       // min eigenvalue of W
    double trace_slack = 0.0;     // P0 - Tr(W)
    double rate_slack = 0.0;      // Tr(h h^H W) - Omega
    double lmi_min_eig = 0.0;     // min eigenvalue of the 2x2 LMI at (W, t_star)
    double lmi_scale = 1.0;       // Frobenius norm of that LMI
};

/// Assembles the lifted problem. Rejects infeasible rate demands up front
/// (reuses the closed-form feasibility test).
SdpProblem build_sdp(const CVector& h, const ScenarioConfig& cfg);

/// Interior-point solve. Throws ConvergenceError (with gap and iteration
/// count) if the requested tolerance is not reached.
SdpSolution solve_sdp(const SdpProblem& prob, const SolverOptions& opts = {});

SdpResiduals solution_residuals(const SdpProblem& prob, const SdpSolution& sol);

/// Recovers a feasible rank-one beamformer from W: the principal eigenpair
/// directly when W is numerically rank-one, otherwise the best of n_rand
/// Gaussian randomization candidates (blended toward the channel direction
/// when the rate constraint would otherwise fail). The result is scaled to
/// full power. Throws ExtractionError if no feasible candidate exists.
Beamformer extract_rank_one(const SdpSolution& sol, const CVector& h,
                            const ScenarioConfig& cfg, int n_rand,
                            double rank_one_ratio = 1e-6);

/// End-to-end pipeline: build, solve, extract.
std::pair<Beamformer, SdpSolution>
solve_with_interference(const CVector& h, const ScenarioConfig& cfg,
                        const SolverOptions& opts = {});

} // namespace isac
