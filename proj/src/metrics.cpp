// SPDX-License-Identifier: Apache-2.0

#include "isac/metrics.hpp"

#include <cmath>
#include <numbers>

namespace isac {

MiValue make_mi(double nats) {
    if (nats < 0.0) {
        if (nats < -1e-9)
            throw DomainError("mutual information came out negative", nats);
        nats = 0.0;
    }
    return MiValue{nats, nats / std::numbers::ln2};
}

MiValue mi_no_interference(const Beamformer& bf, const ScenarioConfig& cfg) {
    cfg.validate();
    const CVector a = steering_vector(cfg.target_angle_deg, cfg.n_tx, cfg.spacing_tx);
    const double gain = std::norm(cdot(a, bf.w));
    const double arg = cfg.frame_len * cfg.beta * cfg.beta * cfg.n_rx * gain / cfg.sigma_z_sq();
    return make_mi(std::log1p(arg));
}

MiValue mi_with_interference(const Beamformer& bf, const ScenarioConfig& cfg) {
    cfg.validate();
    if (cfg.gamma == 0.0) return mi_no_interference(bf, cfg);

    const CVector a1 = steering_vector(cfg.target_angle_deg, cfg.n_tx, cfg.spacing_tx);
    const CVector b1 = steering_vector(cfg.target_angle_deg, cfg.n_rx, cfg.spacing_rx);
    const CVector a2 = steering_vector(cfg.interferer_angle_deg, cfg.n_tx, cfg.spacing_tx);
    const CVector b2 = steering_vector(cfg.interferer_angle_deg, cfg.n_rx, cfg.spacing_rx);

    const double l = cfg.frame_len;
    const double b2sq = cfg.beta * cfg.beta;
    const double g2sq = cfg.gamma * cfg.gamma;
    const double sz = cfg.sigma_z_sq();

    // w^H P P^H w = |b1|^2 |a1^H w|^2 and likewise for Q; the cross term is
    // w^H P Q^H w = (b1^H b2) (w^H a1) (a2^H w).
    const double p = cfg.n_rx * std::norm(cdot(a1, bf.w));
    const double q = cfg.n_rx * std::norm(cdot(a2, bf.w));
    const double cross = std::norm(cdot(b1, b2) * std::conj(cdot(a1, bf.w)) * cdot(a2, bf.w));

    const double denom = l * g2sq * q + sz;
    // p * denom - L g^2 |cross| recast so both summands are nonnegative
    const double numer = l * g2sq * (p * q - cross) + sz * p;
    const double arg = l * b2sq * numer / (denom * sz);
    return make_mi(std::log1p(arg));
}

MiValue mi_full_oracle(const Beamformer& bf, const CVector& s_in, const ScenarioConfig& cfg) {
    cfg.validate();
    const std::size_t l = static_cast<std::size_t>(cfg.frame_len);
    const std::size_t nr = static_cast<std::size_t>(cfg.n_rx);
    const std::size_t nt = static_cast<std::size_t>(cfg.n_tx);
    if (s_in.size() != l) throw DimensionError("mi_full_oracle: s must have length frame_len");
    if (l * nr > 512) throw ScaleError("mi_full_oracle: L * N_R exceeds the oracle guard (512)");
    if (bf.w.size() != nt) throw DimensionError("mi_full_oracle: w must have length n_tx");

    // enforce s^H s == L exactly; the large-L power approximation becomes an
    // identity and the oracle matches the reduced forms for any L
    CVector s = s_in;
    const double sn = norm(s);
    if (sn == 0.0) throw DomainError("mi_full_oracle: s must be nonzero");
    const double rescale = std::sqrt(static_cast<double>(l)) / sn;
    for (cd& z : s) z *= rescale;

    const CMatrix s_tilde = kron(CMatrix::identity(nr), CMatrix::col_vector(s));
    CVector w_conj(bf.w.size());
    for (std::size_t i = 0; i < bf.w.size(); ++i) w_conj[i] = std::conj(bf.w[i]);
    const CMatrix w_tilde = kron(CMatrix::identity(nr), CMatrix::row_vector(w_conj));
    const CMatrix x_tilde = s_tilde * w_tilde;    // (L N_R) x (N_R N_T)

    const CovModel covr = make_cov_model(cfg.target_angle_deg, cfg.beta, cfg);
    const CovModel covc = make_cov_model(cfg.interferer_angle_deg, cfg.gamma, cfg);
    const CMatrix rr = covr.strength * CMatrix::outer(covr.vec_p, covr.vec_p);
    const CMatrix rc = covc.strength * CMatrix::outer(covc.vec_p, covc.vec_p);

    const double sz = cfg.sigma_z_sq();
    const CMatrix x_adj = x_tilde.adjoint();
    CMatrix sig_full = x_tilde * (rr + rc) * x_adj;
    CMatrix sig_cond = x_tilde * rc * x_adj;
    for (std::size_t i = 0; i < l * nr; ++i) {
        sig_full(i, i) += sz;
        sig_cond(i, i) += sz;
    }
    return make_mi(logdet_hpd(sig_full) - logdet_hpd(sig_cond));
}

double comm_rate(const Beamformer& bf, const CVector& h, double sigma_n_sq) {
    if (!(sigma_n_sq > 0.0)) throw DomainError("comm_rate: sigma_n_sq must be > 0");
    const double snr = std::norm(cdot(h, bf.w)) / sigma_n_sq;
    return std::log2(1.0 + snr);
}

double sdr_objective(const CMatrix& w_mat, const ScenarioConfig& cfg) {
    cfg.validate();
    const std::size_t nt = static_cast<std::size_t>(cfg.n_tx);
    if (w_mat.rows() != nt || w_mat.cols() != nt)
        throw DimensionError("sdr_objective: W must be n_tx x n_tx");

    CMatrix w(nt, nt);
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < nt; ++j)
            w(i, j) = 0.5 * (w_mat(i, j) + std::conj(w_mat(j, i)));

    const HermEig eig = herm_eig(w);
    const double lam_max = eig.eigenvalues.front();
    const double lam_min = eig.eigenvalues.back();
    if (lam_min < -1e-8 * std::max(1.0, std::abs(lam_max)))
        throw DomainError("sdr_objective: W is not PSD within 1e-8", lam_min);

    const CVector a1 = steering_vector(cfg.target_angle_deg, cfg.n_tx, cfg.spacing_tx);
    const CVector b1 = steering_vector(cfg.target_angle_deg, cfg.n_rx, cfg.spacing_rx);
    const CVector a2 = steering_vector(cfg.interferer_angle_deg, cfg.n_tx, cfg.spacing_tx);
    const CVector b2 = steering_vector(cfg.interferer_angle_deg, cfg.n_rx, cfg.spacing_rx);

    const double l = cfg.frame_len;
    const double b2sq = cfg.beta * cfg.beta;
    const double g2sq = cfg.gamma * cfg.gamma;
    const double sz = cfg.sigma_z_sq();

    // Tr(PP^H W) = N_R a1^H W a1, Tr(QP^H W) = (b2^H b1) a1^H W a2
    const double tr_pp = cfg.n_rx * quad_form(w, a1);
    const double tr_qq = cfg.n_rx * quad_form(w, a2);
    const cd tr_qp = cdot(b2, b1) * bilinear_form(w, a1, a2);

    const double d = l * g2sq * tr_qq + sz;
    const double n = (l * b2sq * tr_pp + sz) * d - l * l * b2sq * g2sq * std::norm(tr_qp);
    return n / d;
}

std::vector<double> beampattern_linear(const Beamformer& bf,
                                       const std::vector<double>& grid_deg,
                                       const ScenarioConfig& cfg) {
    cfg.validate();
    if (grid_deg.empty()) throw ArgumentError("beampattern: empty angle grid");
    std::vector<double> out;
    out.reserve(grid_deg.size());
    for (double ang : grid_deg) {
        const CVector a = steering_vector(ang, cfg.n_tx, cfg.spacing_tx);
        out.push_back(std::norm(cdot(a, bf.w)));
    }
    return out;
}

std::vector<double> beampattern_db(const Beamformer& bf,
                                   const std::vector<double>& grid_deg,
                                   const ScenarioConfig& cfg,
                                   double floor_db) {
    std::vector<double> lin = beampattern_linear(bf, grid_deg, cfg);
    double peak = 0.0;
    for (double v : lin) peak = std::max(peak, v);
    if (peak <= 0.0) return std::vector<double>(lin.size(), floor_db);
    for (double& v : lin) {
        const double db = v > 0.0 ? 10.0 * std::log10(v / peak) : floor_db;
        v = std::max(db, floor_db);
    }
    return lin;
}

} // namespace isac
