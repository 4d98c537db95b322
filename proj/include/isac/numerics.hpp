// SPDX-License-Identifier: Apache-2.0
//
// numerics.hpp - self-contained dense complex/real linear-algebra kernels
//
// Everything here is domain-agnostic: dense matrices, a cyclic-Jacobi
// Hermitian eigensolver, Cholesky-based log-determinants, Kronecker
// products and the standard real embedding of Hermitian matrices.
// Sizes in this project are tiny (n <= ~512 for oracles, n <= ~30 in the
// solver hot path), so the kernels favour determinism and simplicity.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "isac/errors.hpp"

namespace isac {

using cd = std::complex<double>;
using CVector = std::vector<cd>;
using RVector = std::vector<double>;

/// Dense complex matrix, row-major. Constructors taking entry data reject
/// non-finite values (NaN/Inf).
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);                     // zero-filled
    CMatrix(std::size_t rows, std::size_t cols, std::vector<cd> entries);

    static CMatrix identity(std::size_t n);
    /// Column vector (n x 1) from v.
    static CMatrix col_vector(const CVector& v);
    /// Row vector (1 x n) holding v unchanged (no conjugation).
    static CMatrix row_vector(const CVector& v);
    /// Rank-one outer product x * y^H.
    static CMatrix outer(const CVector& x, const CVector& y);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cd& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cd& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    CMatrix adjoint() const;    // conjugate transpose
    CMatrix transpose() const;
    CMatrix conj() const;

    cd trace() const;
    double frobenius_norm() const;
    /// ||A - A^H||_F <= tol * max(||A||_F, 1e-300)
    bool is_hermitian(double tol = 1e-12) const;
    bool all_finite() const;

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cd s);

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { a += b; return a; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { a -= b; return a; }
    friend CMatrix operator*(cd s, CMatrix a) { a *= s; return a; }
    friend CMatrix operator*(CMatrix a, cd s) { a *= s; return a; }
    friend CMatrix operator*(const CMatrix& a, const CMatrix& b);    // matmul

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cd> data_;
};

/// Dense real matrix, row-major.
class RMatrix {
  public:
    RMatrix() = default;
    RMatrix(std::size_t rows, std::size_t cols);
    RMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static RMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RMatrix transpose() const;
    double trace() const;
    double frobenius_norm() const;

    RMatrix& operator+=(const RMatrix& o);
    RMatrix& operator-=(const RMatrix& o);
    RMatrix& operator*=(double s);

    friend RMatrix operator+(RMatrix a, const RMatrix& b) { a += b; return a; }
    friend RMatrix operator-(RMatrix a, const RMatrix& b) { a -= b; return a; }
    friend RMatrix operator*(double s, RMatrix a) { a *= s; return a; }
    friend RMatrix operator*(const RMatrix& a, const RMatrix& b);    // matmul

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Eigendecomposition of a Hermitian matrix: eigenvalues sorted descending,
/// eigenvector columns paired with them. V diag(lambda) V^H reconstructs the
/// input to 1e-10 * ||input|| and V^H V = I to 1e-10.
struct HermEig {
    RVector eigenvalues;
    CMatrix eigenvectors;
};

/// Real symmetric counterpart of HermEig.
struct SymEig {
    RVector eigenvalues;
    RMatrix eigenvectors;
};

/// SVD of a square real matrix, singular values sorted descending.
struct SvdResult {
    RMatrix u;
    RVector sigma;
    RMatrix v;    // B = U diag(sigma) V^T
};

/// Cyclic-Jacobi eigensolver for a Hermitian matrix. The input is
/// symmetrized internally (H <- (H + H^H)/2); callers are expected to pass
/// matrices that are Hermitian up to rounding. Throws DimensionError for
/// non-square input.
HermEig herm_eig(const CMatrix& h);

/// Cyclic-Jacobi eigensolver for a real symmetric matrix (symmetrized
/// internally). Throws DimensionError for non-square input.
SymEig sym_eig(const RMatrix& s);

/// log(det(H)) in nats for a Hermitian positive-definite matrix, computed
/// via Cholesky. Throws DomainError (carrying the minimum eigenvalue) if the
/// factorization breaks down.
double logdet_hpd(const CMatrix& h);

/// Kronecker product, dimensions (rA*rB) x (cA*cB).
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Real embedding [[Re H, -Im H], [Im H, Re H]] of a Hermitian matrix.
/// The output is symmetric 2n x 2n; it is PSD iff H is, and its spectrum is
/// that of H with every eigenvalue doubled in multiplicity. Throws
/// DomainError if H is not Hermitian within 1e-12 relative.
RMatrix real_embed(const CMatrix& h);

/// Lower Cholesky factor of a Hermitian positive-definite matrix.
/// Throws DomainError on breakdown (carrying the minimum eigenvalue).
CMatrix chol_lower(const CMatrix& a);

/// Lower Cholesky factor of a symmetric positive-definite real matrix.
/// Throws DomainError on breakdown.
RMatrix chol_lower_real(const RMatrix& a);

/// One-sided-Jacobi SVD of a square real matrix.
SvdResult svd_jacobi(const RMatrix& b);

// -- small vector helpers ---------------------------------------------------

/// x^H y
cd cdot(const CVector& x, const CVector& y);
double norm_sq(const CVector& x);
double norm(const CVector& x);
CVector matvec(const CMatrix& a, const CVector& x);
/// x^H A x (real part; the imaginary part vanishes for Hermitian A).
double quad_form(const CMatrix& a, const CVector& x);
/// x^H A y
cd bilinear_form(const CMatrix& a, const CVector& x, const CVector& y);

} // namespace isac
