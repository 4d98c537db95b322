// SPDX-License-Identifier: Apache-2.0
//
// metrics.hpp - performance evaluators: radar mutual information (exact
// oracle and reduced scalar forms), communication rate, the SDR fractional
// objective and the transmit beampattern.
//
// All mutual-information values are normalized so that "no echo energy"
// evaluates to exactly zero; the reduced forms and the full-dimension oracle
// then agree on their common special cases.

#pragma once

#include <vector>

#include "isac/scenario.hpp"

namespace isac {

/// Mutual information in nats and bits (bits = nats / ln 2).
struct MiValue {
    double nats = 0.0;
    double bits = 0.0;
};

/// Wraps a nats value; tiny negative rounding residue (>= -1e-9) is clamped
/// to zero, anything more negative signals a bug upstream.
MiValue make_mi(double nats);

/// MI = log(1 + L beta^2 N_R |a^H w|^2 / sigma_z^2); the receive-side factor
/// zeta = |b|^2 = N_R is substituted symbolically.
MiValue mi_no_interference(const Beamformer& bf, const ScenarioConfig& cfg);

/// Reduced 2x2-determinant form of the MI with communication-echo
/// interference. Equals mi_no_interference exactly when gamma == 0.
MiValue mi_with_interference(const Beamformer& bf, const ScenarioConfig& cfg);

/// Full-dimension oracle: builds S~ = I kron s and W~ = I kron w^H
/// explicitly and evaluates the two log-determinants over dimension
/// L * N_R. The symbol stream s is rescaled so s^H s == L exactly.
/// Throws ScaleError when L * N_R > 512 and DimensionError when s has the
/// wrong length.
MiValue mi_full_oracle(const Beamformer& bf, const CVector& s, const ScenarioConfig& cfg);

/// R = log2(1 + |h^H w|^2 / sigma_n^2) in bits/s/Hz.
double comm_rate(const Beamformer& bf, const CVector& h, double sigma_n_sq);

/// The fractional objective whose log equals the with-interference MI on
/// rank-one W = w w^H:
///   [(L g^2 Tr(QQ^H W)+s)(L b^2 Tr(PP^H W)+s) - L^2 b^2 g^2 |Tr(QP^H W)|^2]
///   / (L g^2 Tr(QQ^H W) + s)             with s = sigma_z^2.
/// Throws DomainError unless W is Hermitian PSD within 1e-8.
double sdr_objective(const CMatrix& w_mat, const ScenarioConfig& cfg);

/// Transmit beampattern |a(theta)^H w|^2 over the grid (linear scale).
std::vector<double> beampattern_linear(const Beamformer& bf,
                                       const std::vector<double>& grid_deg,
                                       const ScenarioConfig& cfg);

/// Peak-normalized beampattern in dB: max over the grid is 0 dB, values are
/// clamped at floor_db (exact nulls report the floor).
std::vector<double> beampattern_db(const Beamformer& bf,
                                   const std::vector<double>& grid_deg,
                                   const ScenarioConfig& cfg,
                                   double floor_db = -80.0);

} // namespace isac
