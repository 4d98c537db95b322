// SPDX-License-Identifier: Apache-2.0

#include "isac/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace isac {

namespace {

bool finite(cd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double sgn(double x) { return x >= 0.0 ? 1.0 : -1.0; }

} // namespace

// -- CMatrix ------------------------------------------------------------

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cd(0.0, 0.0)) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cd> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
        throw DimensionError("CMatrix: entry count does not match rows*cols");
    for (const cd& z : data_)
        if (!finite(z)) throw DomainError("CMatrix: non-finite entry");
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::col_vector(const CVector& v) {
    CMatrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

CMatrix CMatrix::row_vector(const CVector& v) {
    CMatrix m(1, v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m(0, i) = v[i];
    return m;
}

CMatrix CMatrix::outer(const CVector& x, const CVector& y) {
    CMatrix m(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j)
            m(i, j) = x[i] * std::conj(y[j]);
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m(j, i) = std::conj((*this)(i, j));
    return m;
}

CMatrix CMatrix::transpose() const {
    CMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m(j, i) = (*this)(i, j);
    return m;
}

CMatrix CMatrix::conj() const {
    CMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] = std::conj(data_[i]);
    return m;
}

cd CMatrix::trace() const {
    cd t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const cd& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

bool CMatrix::is_hermitian(double tol) const {
    if (rows_ != cols_) return false;
    double dev = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            dev += std::norm((*this)(i, j) - std::conj((*this)(j, i)));
    return std::sqrt(2.0 * dev) <= tol * std::max(frobenius_norm(), 1e-300);
}

bool CMatrix::all_finite() const {
    for (const cd& z : data_)
        if (!finite(z)) return false;
    return true;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("CMatrix +=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("CMatrix -=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(cd s) {
    for (cd& z : data_) z *= s;
    return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("CMatrix *: inner dimensions differ");
    CMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cd aik = a(i, k);
            if (aik == cd(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

// -- RMatrix ------------------------------------------------------------

RMatrix::RMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

RMatrix::RMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
        throw DimensionError("RMatrix: entry count does not match rows*cols");
    for (double x : data_)
        if (!std::isfinite(x)) throw DomainError("RMatrix: non-finite entry");
}

RMatrix RMatrix::identity(std::size_t n) {
    RMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

RMatrix RMatrix::transpose() const {
    RMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m(j, i) = (*this)(i, j);
    return m;
}

double RMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

double RMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
}

RMatrix& RMatrix::operator+=(const RMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("RMatrix +=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

RMatrix& RMatrix::operator-=(const RMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("RMatrix -=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

RMatrix& RMatrix::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

RMatrix operator*(const RMatrix& a, const RMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("RMatrix *: inner dimensions differ");
    RMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

// -- eigensolvers ---------------------------------------------------------

namespace {

double offdiag_norm(const CMatrix& a) {
    double s = 0.0;
    for (std::size_t p = 0; p + 1 < a.rows(); ++p)
        for (std::size_t q = p + 1; q < a.cols(); ++q)
            s += std::norm(a(p, q));
    return std::sqrt(2.0 * s);
}

double offdiag_norm(const RMatrix& a) {
    double s = 0.0;
    for (std::size_t p = 0; p + 1 < a.rows(); ++p)
        for (std::size_t q = p + 1; q < a.cols(); ++q)
            s += a(p, q) * a(p, q);
    return std::sqrt(2.0 * s);
}

// Make the largest-modulus entry of each eigenvector column real positive
// so repeated runs produce identical output.
void canonicalize_columns(CMatrix& v) {
    const std::size_t n = v.rows();
    for (std::size_t j = 0; j < v.cols(); ++j) {
        std::size_t k = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            double m = std::abs(v(i, j));
            if (m > best + 1e-30) { best = m; k = i; }
        }
        cd pivot = v(k, j);
        double m = std::abs(pivot);
        if (m > 0.0) {
            cd rot = std::conj(pivot) / m;
            for (std::size_t i = 0; i < n; ++i) v(i, j) *= rot;
        }
    }
}

void canonicalize_columns(RMatrix& v) {
    const std::size_t n = v.rows();
    for (std::size_t j = 0; j < v.cols(); ++j) {
        std::size_t k = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            double m = std::abs(v(i, j));
            if (m > best + 1e-30) { best = m; k = i; }
        }
        if (v(k, j) < 0.0)
            for (std::size_t i = 0; i < n; ++i) v(i, j) = -v(i, j);
    }
}

} // namespace

HermEig herm_eig(const CMatrix& h) {
    if (h.rows() != h.cols()) throw DimensionError("herm_eig: matrix is not square");
    const std::size_t n = h.rows();

    // Silent symmetrization; inputs are Hermitian up to rounding by contract.
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));

    CMatrix v = CMatrix::identity(n);
    const double scale = std::max(a.frobenius_norm(), 1e-300);
    const int max_sweeps = 100;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (offdiag_norm(a) <= 1e-15 * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cd apq = a(p, q);
                const double m = std::abs(apq);
                if (m == 0.0) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * m);
                const double t = sgn(theta) / (std::abs(theta) + std::hypot(1.0, theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cd se = s * (apq / m);    // s * e^{i phi}

                // A <- G^H A G where G rotates the (p, q) plane:
                // G_pp = c, G_pq = s, G_qp = -s e^{-i phi}, G_qq = c e^{-i phi}.
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const cd arp = a(r, p);
                    const cd arq = a(r, q);
                    a(r, p) = c * arp - std::conj(se) * arq;
                    a(r, q) = s * arp + c * std::conj(apq / m) * arq;
                    a(p, r) = std::conj(a(r, p));
                    a(q, r) = std::conj(a(r, q));
                }
                a(p, p) = app - t * m;
                a(q, q) = aqq + t * m;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                for (std::size_t r = 0; r < n; ++r) {
                    const cd vrp = v(r, p);
                    const cd vrq = v(r, q);
                    v(r, p) = c * vrp - std::conj(se) * vrq;
                    v(r, q) = s * vrp + c * std::conj(apq / m) * vrq;
                }
            }
        }
    }

    RVector lam(n);
    for (std::size_t i = 0; i < n; ++i) lam[i] = a(i, i).real();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return lam[i] > lam[j]; });

    HermEig out;
    out.eigenvalues.resize(n);
    out.eigenvectors = CMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = lam[order[j]];
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    }
    canonicalize_columns(out.eigenvectors);
    return out;
}

SymEig sym_eig(const RMatrix& s_in) {
    if (s_in.rows() != s_in.cols()) throw DimensionError("sym_eig: matrix is not square");
    const std::size_t n = s_in.rows();

    RMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (s_in(i, j) + s_in(j, i));

    RMatrix v = RMatrix::identity(n);
    const double scale = std::max(a.frobenius_norm(), 1e-300);
    const int max_sweeps = 100;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (offdiag_norm(a) <= 1e-15 * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = sgn(theta) / (std::abs(theta) + std::hypot(1.0, theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = c * arp - s * arq;
                    a(r, q) = s * arp + c * arq;
                    a(p, r) = a(r, p);
                    a(q, r) = a(r, q);
                }
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                for (std::size_t r = 0; r < n; ++r) {
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = c * vrp - s * vrq;
                    v(r, q) = s * vrp + c * vrq;
                }
            }
        }
    }

    RVector lam(n);
    for (std::size_t i = 0; i < n; ++i) lam[i] = a(i, i);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return lam[i] > lam[j]; });

    SymEig out;
    out.eigenvalues.resize(n);
    out.eigenvectors = RMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = lam[order[j]];
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    }
    canonicalize_columns(out.eigenvectors);
    return out;
}

// -- Cholesky -------------------------------------------------------------

CMatrix chol_lower(const CMatrix& a_in) {
    if (a_in.rows() != a_in.cols()) throw DimensionError("chol_lower: matrix is not square");
    const std::size_t n = a_in.rows();
    CMatrix l(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        double d = 0.5 * (a_in(k, k) + std::conj(a_in(k, k))).real();
        for (std::size_t j = 0; j < k; ++j) d -= std::norm(l(k, j));
        if (!(d > 0.0)) {
            const double lam_min = herm_eig(a_in).eigenvalues.back();
            throw DomainError("chol_lower: matrix is not positive definite", lam_min);
        }
        const double lkk = std::sqrt(d);
        l(k, k) = lkk;
        for (std::size_t i = k + 1; i < n; ++i) {
            cd v = 0.5 * (a_in(i, k) + std::conj(a_in(k, i)));
            for (std::size_t j = 0; j < k; ++j) v -= l(i, j) * std::conj(l(k, j));
            l(i, k) = v / lkk;
        }
    }
    return l;
}

RMatrix chol_lower_real(const RMatrix& a_in) {
    if (a_in.rows() != a_in.cols()) throw DimensionError("chol_lower_real: matrix is not square");
    const std::size_t n = a_in.rows();
    RMatrix l(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        double d = a_in(k, k);
        for (std::size_t j = 0; j < k; ++j) d -= l(k, j) * l(k, j);
        if (!(d > 0.0)) {
            const double lam_min = sym_eig(a_in).eigenvalues.back();
            throw DomainError("chol_lower_real: matrix is not positive definite", lam_min);
        }
        const double lkk = std::sqrt(d);
        l(k, k) = lkk;
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = 0.5 * (a_in(i, k) + a_in(k, i));
            for (std::size_t j = 0; j < k; ++j) v -= l(i, j) * l(k, j);
            l(i, k) = v / lkk;
        }
    }
    return l;
}

double logdet_hpd(const CMatrix& h) {
    const CMatrix l = chol_lower(h);
    double s = 0.0;
    for (std::size_t k = 0; k < l.rows(); ++k) s += std::log(l(k, k).real());
    return 2.0 * s;
}

// -- Kronecker and real embedding ------------------------------------------

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia)
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            const cd f = a(ia, ja);
            if (f == cd(0.0, 0.0)) continue;
            for (std::size_t ib = 0; ib < b.rows(); ++ib)
                for (std::size_t jb = 0; jb < b.cols(); ++jb)
                    c(ia * b.rows() + ib, ja * b.cols() + jb) = f * b(ib, jb);
        }
    return c;
}

RMatrix real_embed(const CMatrix& h) {
    if (h.rows() != h.cols()) throw DimensionError("real_embed: matrix is not square");
    if (!h.is_hermitian(1e-12))
        throw DomainError("real_embed: matrix is not Hermitian within 1e-12 relative");
    const std::size_t n = h.rows();
    CMatrix hs(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            hs(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));

    RMatrix e(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double re = hs(i, j).real();
            const double im = hs(i, j).imag();
            e(i, j) = re;
            e(n + i, n + j) = re;
            e(i, n + j) = -im;
            e(n + i, j) = im;
        }
    return e;
}

// -- SVD --------------------------------------------------------------------

SvdResult svd_jacobi(const RMatrix& b_in) {
    if (b_in.rows() != b_in.cols()) throw DimensionError("svd_jacobi: matrix is not square");
    const std::size_t n = b_in.rows();
    RMatrix b = b_in;
    RMatrix v = RMatrix::identity(n);
    const int max_sweeps = 60;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    alpha += b(k, i) * b(k, i);
                    beta += b(k, j) * b(k, j);
                    gamma += b(k, i) * b(k, j);
                }
                if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) + 1e-300) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = sgn(zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t k = 0; k < n; ++k) {
                    const double bi = b(k, i), bj = b(k, j);
                    b(k, i) = c * bi - s * bj;
                    b(k, j) = s * bi + c * bj;
                    const double vi = v(k, i), vj = v(k, j);
                    v(k, i) = c * vi - s * vj;
                    v(k, j) = s * vi + c * vj;
                }
            }
        }
        if (!rotated) break;
    }

    RVector sig(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += b(k, j) * b(k, j);
        sig[j] = std::sqrt(s);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return sig[i] > sig[j]; });

    SvdResult out;
    out.sigma.resize(n);
    out.u = RMatrix(n, n);
    out.v = RMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.sigma[j] = sig[src];
        const double inv = sig[src] > 0.0 ? 1.0 / sig[src] : 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            out.u(k, j) = b(k, src) * inv;
            out.v(k, j) = v(k, src);
        }
    }
    return out;
}

// -- vector helpers ----------------------------------------------------------

cd cdot(const CVector& x, const CVector& y) {
    if (x.size() != y.size()) throw DimensionError("cdot: length mismatch");
    cd s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

double norm_sq(const CVector& x) {
    double s = 0.0;
    for (const cd& z : x) s += std::norm(z);
    return s;
}

double norm(const CVector& x) { return std::sqrt(norm_sq(x)); }

CVector matvec(const CMatrix& a, const CVector& x) {
    if (a.cols() != x.size()) throw DimensionError("matvec: shape mismatch");
    CVector y(a.rows(), cd(0.0, 0.0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            y[i] += a(i, j) * x[j];
    return y;
}

double quad_form(const CMatrix& a, const CVector& x) {
    return bilinear_form(a, x, x).real();
}

cd bilinear_form(const CMatrix& a, const CVector& x, const CVector& y) {
    if (a.rows() != x.size() || a.cols() != y.size())
        throw DimensionError("bilinear_form: shape mismatch");
    cd s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cd row = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) row += a(i, j) * y[j];
        s += std::conj(x[i]) * row;
    }
    return s;
}

} // namespace isac
