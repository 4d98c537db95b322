// SPDX-License-Identifier: Apache-2.0

#include "isac/ipm.hpp"

#include <algorithm>
#include <cmath>

namespace isac::ipm {

namespace {

using Blocks = std::vector<RMatrix>;

Blocks identity_blocks(const std::vector<int>& dims) {
    Blocks out;
    out.reserve(dims.size());
    for (int d : dims) out.push_back(RMatrix::identity(static_cast<std::size_t>(d)));
    return out;
}

Blocks zero_blocks(const std::vector<int>& dims) {
    Blocks out;
    out.reserve(dims.size());
    for (int d : dims)
        out.emplace_back(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
    return out;
}

/// Tr(F X) for sparse symmetric F against dense symmetric X.
double sdot(const BlockSparse& f, const Blocks& x) {
    double s = 0.0;
    for (std::size_t blk = 0; blk < f.size(); ++blk)
        for (const Entry& e : f[blk]) {
            const double xv = x[blk](static_cast<std::size_t>(e.row),
                                     static_cast<std::size_t>(e.col));
            s += e.value * xv * (e.row == e.col ? 1.0 : 2.0);
        }
    return s;
}

/// dense += coef * F
void accumulate(Blocks& dense, const BlockSparse& f, double coef) {
    for (std::size_t blk = 0; blk < f.size(); ++blk)
        for (const Entry& e : f[blk]) {
            dense[blk](static_cast<std::size_t>(e.row), static_cast<std::size_t>(e.col)) +=
                coef * e.value;
            if (e.row != e.col)
                dense[blk](static_cast<std::size_t>(e.col), static_cast<std::size_t>(e.row)) +=
                    coef * e.value;
        }
}

/// Tr(Fi G Fj G) for two sparse symmetric blocks against a dense symmetric G.
double pair_trace(const std::vector<Entry>& fi, const std::vector<Entry>& fj,
                  const RMatrix& g) {
    double s = 0.0;
    for (const Entry& a : fi) {
        const auto ar = static_cast<std::size_t>(a.row);
        const auto ac = static_cast<std::size_t>(a.col);
        for (const Entry& b : fj) {
            const auto br = static_cast<std::size_t>(b.row);
            const auto bc = static_cast<std::size_t>(b.col);
            // expand the symmetrized products term by term:
            // Tr(E_{xy} G E_{uv} G) = G(y,u) G(v,x)
            double t = g(ac, br) * g(bc, ar);
            if (b.row != b.col) t += g(ac, bc) * g(br, ar);
            if (a.row != a.col) {
                t += g(ar, br) * g(bc, ac);
                if (b.row != b.col) t += g(ar, bc) * g(br, ac);
            }
            s += a.value * b.value * t;
        }
    }
    return s;
}

double frob(const Blocks& x) {
    double s = 0.0;
    for (const RMatrix& m : x) {
        const double f = m.frobenius_norm();
        s += f * f;
    }
    return std::sqrt(s);
}

double block_dot(const Blocks& a, const Blocks& b) {
    double s = 0.0;
    for (std::size_t blk = 0; blk < a.size(); ++blk)
        for (std::size_t i = 0; i < a[blk].rows(); ++i)
            for (std::size_t j = 0; j < a[blk].cols(); ++j)
                s += a[blk](i, j) * b[blk](i, j);
    return s;
}

void symmetrize(RMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }
}

/// Largest step alpha with Lambda + alpha * D >= 0, via the normalized
/// matrix N = Lambda^{-1/2} D Lambda^{-1/2}.
double max_step(const RVector& lam, const RMatrix& d) {
    const std::size_t n = lam.size();
    RMatrix nmat(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            nmat(i, j) = d(i, j) / std::sqrt(lam[i] * lam[j]);
    const double lam_min = sym_eig(nmat).eigenvalues.back();
    if (lam_min >= -1e-14) return 1e12;
    return -1.0 / lam_min;
}

/// Cholesky of the Schur matrix with an escalating diagonal ridge.
RMatrix chol_with_ridge(RMatrix m) {
    double max_diag = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) max_diag = std::max(max_diag, m(i, i));
    double ridge = 0.0;
    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            RMatrix trial = m;
            for (std::size_t i = 0; i < trial.rows(); ++i) trial(i, i) += ridge;
            return chol_lower_real(trial);
        } catch (const DomainError&) {
            ridge = ridge == 0.0 ? 1e-13 * std::max(max_diag, 1.0) : ridge * 100.0;
        }
    }
    throw DomainError("ipm: Schur complement is numerically singular");
}

RVector chol_solve(const RMatrix& l, RVector rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t i = 0; i < n; ++i) {
        double v = rhs[i];
        for (std::size_t j = 0; j < i; ++j) v -= l(i, j) * rhs[j];
        rhs[i] = v / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double v = rhs[ii];
        for (std::size_t j = ii + 1; j < n; ++j) v -= l(j, ii) * rhs[j];
        rhs[ii] = v / l(ii, ii);
    }
    return rhs;
}

} // namespace

Result solve(const Problem& prob, const Options& opts) {
    const std::size_t m = prob.b.size();
    const std::size_t nb = prob.dims.size();
    int ntot = 0;
    for (int d : prob.dims) ntot += d;

    Blocks x = identity_blocks(prob.dims);
    Blocks s = identity_blocks(prob.dims);
    RVector y(m, 0.0);

    // dense F0 for residuals
    Blocks c_dense = zero_blocks(prob.dims);
    accumulate(c_dense, prob.f0, 1.0);
    const double norm_c = std::max(1.0, frob(c_dense));
    double norm_b = 1.0;
    for (double v : prob.b) norm_b = std::max(norm_b, std::abs(v));

    Result res;
    int stalls = 0;

    for (int iter = 0; iter <= opts.max_iters; ++iter) {
        // residuals and gap
        RVector rp(m);
        for (std::size_t i = 0; i < m; ++i) rp[i] = prob.b[i] + sdot(prob.constraints[i], x);

        Blocks rd = c_dense;
        for (std::size_t blk = 0; blk < nb; ++blk) rd[blk] -= s[blk];
        for (std::size_t i = 0; i < m; ++i)
            if (y[i] != 0.0) accumulate(rd, prob.constraints[i], y[i]);

        const double pobj = sdot(prob.f0, x);
        double dobj = 0.0;
        for (std::size_t i = 0; i < m; ++i) dobj += prob.b[i] * y[i];
        const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

        double rp_norm = 0.0;
        for (double v : rp) rp_norm = std::max(rp_norm, std::abs(v));
        rp_norm /= norm_b;
        const double rd_norm = frob(rd) / norm_c;

        res.y = y;
        res.dual_obj = dobj;
        res.primal_obj = pobj;
        res.rel_gap = gap;
        res.primal_res = rp_norm;
        res.dual_res = rd_norm;
        res.iterations = iter;

        if (gap <= opts.tol && rp_norm <= opts.feas_tol && rd_norm <= opts.feas_tol) {
            res.converged = true;
            return res;
        }
        if (iter == opts.max_iters) break;

        double mu = block_dot(x, s) / ntot;
        if (mu <= 0.0) break;

        // Nesterov-Todd scaling per block: R^T S R = R^{-1} X R^{-T} = diag(lambda)
        Blocks r_mat(nb), rinv_mat(nb), g_mat(nb);
        std::vector<RVector> lam(nb);
        try {
            for (std::size_t blk = 0; blk < nb; ++blk) {
                const RMatrix lx = chol_lower_real(x[blk]);
                const RMatrix ls = chol_lower_real(s[blk]);
                const SvdResult sv = svd_jacobi(ls.transpose() * lx);
                const std::size_t n = x[blk].rows();
                RMatrix sc(n, n), sci(n, n);
                for (std::size_t i = 0; i < n; ++i) {
                    const double rs = std::sqrt(sv.sigma[i]);
                    sc(i, i) = 1.0 / rs;
                    sci(i, i) = rs;
                }
                r_mat[blk] = lx * sv.v * sc;
                rinv_mat[blk] = sc * sv.u.transpose() * ls.transpose();
                g_mat[blk] = r_mat[blk] * r_mat[blk].transpose();
                lam[blk] = sv.sigma;
            }
        } catch (const DomainError&) {
            break;    // iterate left the cone numerically; report last state
        }

        // Schur matrix M_ij = Tr(F_i G F_j G)
        RMatrix schur(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j) {
                double v = 0.0;
                for (std::size_t blk = 0; blk < nb; ++blk)
                    v += pair_trace(prob.constraints[i][blk], prob.constraints[j][blk],
                                    g_mat[blk]);
                schur(i, j) = v;
                schur(j, i) = v;
            }
        RMatrix schur_l;
        try {
            schur_l = chol_with_ridge(schur);
        } catch (const DomainError&) {
            break;
        }

        // direction solve for a given scaled complementarity target ghat
        auto directions = [&](const Blocks& ghat, RVector& dy, Blocks& dxt, Blocks& dst) {
            RVector rhs = rp;
            for (std::size_t blk = 0; blk < nb; ++blk) {
                const RMatrix t1 = r_mat[blk] * ghat[blk] * r_mat[blk].transpose();
                const RMatrix t2 = g_mat[blk] * rd[blk] * g_mat[blk];
                for (std::size_t i = 0; i < m; ++i) {
                    double acc = 0.0;
                    for (const Entry& e : prob.constraints[i][blk]) {
                        const auto er = static_cast<std::size_t>(e.row);
                        const auto ec = static_cast<std::size_t>(e.col);
                        const double w = e.row == e.col ? 1.0 : 2.0;
                        acc += e.value * w * (t1(er, ec) - t2(er, ec));
                    }
                    rhs[i] += acc;
                }
            }
            dy = chol_solve(schur_l, rhs);

            dst = rd;
            for (std::size_t i = 0; i < m; ++i)
                if (dy[i] != 0.0) accumulate(dst, prob.constraints[i], dy[i]);
            for (std::size_t blk = 0; blk < nb; ++blk) {
                dst[blk] = r_mat[blk].transpose() * dst[blk] * r_mat[blk];
                symmetrize(dst[blk]);
                dxt[blk] = ghat[blk] - dst[blk];
            }
        };

        // predictor: scaled target -Lambda
        Blocks ghat_aff = zero_blocks(prob.dims);
        for (std::size_t blk = 0; blk < nb; ++blk)
            for (std::size_t i = 0; i < lam[blk].size(); ++i)
                ghat_aff[blk](i, i) = -lam[blk][i];

        RVector dy_a;
        Blocks dxt_a = zero_blocks(prob.dims), dst_a = zero_blocks(prob.dims);
        directions(ghat_aff, dy_a, dxt_a, dst_a);

        double ap_aff = 1.0, ad_aff = 1.0;
        for (std::size_t blk = 0; blk < nb; ++blk) {
            ap_aff = std::min(ap_aff, max_step(lam[blk], dxt_a[blk]));
            ad_aff = std::min(ad_aff, max_step(lam[blk], dst_a[blk]));
        }

        double mu_aff = 0.0;
        for (std::size_t blk = 0; blk < nb; ++blk) {
            const std::size_t n = lam[blk].size();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    const double xa = (i == j ? lam[blk][i] : 0.0) + ap_aff * dxt_a[blk](i, j);
                    const double sa = (i == j ? lam[blk][i] : 0.0) + ad_aff * dst_a[blk](i, j);
                    mu_aff += xa * sa;
                }
        }
        mu_aff /= ntot;
        double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
        sigma = std::clamp(sigma, 1e-10, 1.0);

        // corrector: sigma mu I - Lambda^2 - sym(dXt_a dSt_a), solved through
        // the Lyapunov operator (entrywise division by (lambda_i + lambda_j)/2)
        Blocks ghat = zero_blocks(prob.dims);
        for (std::size_t blk = 0; blk < nb; ++blk) {
            const std::size_t n = lam[blk].size();
            const RMatrix prod = dxt_a[blk] * dst_a[blk];
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    double g2 = -0.5 * (prod(i, j) + prod(j, i));
                    if (i == j) g2 += sigma * mu - lam[blk][i] * lam[blk][i];
                    ghat[blk](i, j) = 2.0 * g2 / (lam[blk][i] + lam[blk][j]);
                }
        }

        RVector dy;
        Blocks dxt = zero_blocks(prob.dims), dst = zero_blocks(prob.dims);
        directions(ghat, dy, dxt, dst);

        double ap = 1.0, ad = 1.0;
        for (std::size_t blk = 0; blk < nb; ++blk) {
            ap = std::min(ap, opts.step_frac * max_step(lam[blk], dxt[blk]));
            ad = std::min(ad, opts.step_frac * max_step(lam[blk], dst[blk]));
        }
        ap = std::min(ap, 1.0);
        ad = std::min(ad, 1.0);

        for (std::size_t blk = 0; blk < nb; ++blk) {
            RMatrix dx_un = r_mat[blk] * dxt[blk] * r_mat[blk].transpose();
            RMatrix ds_un = rinv_mat[blk].transpose() * dst[blk] * rinv_mat[blk];
            dx_un *= ap;
            ds_un *= ad;
            x[blk] += dx_un;
            s[blk] += ds_un;
            symmetrize(x[blk]);
            symmetrize(s[blk]);
        }
        for (std::size_t i = 0; i < m; ++i) y[i] += ad * dy[i];

        if (std::max(ap, ad) < 1e-6) {
            if (++stalls >= 5) break;
        } else {
            stalls = 0;
        }
    }

    return res;
}

} // namespace isac::ipm
