// SPDX-License-Identifier: Apache-2.0
//
// ipm.hpp - small dense semidefinite-program solver.
//
// Solves block-diagonal linear matrix inequalities in the dual form
//
//     maximize    b^T y
//     subject to  F(y) = F0 + sum_i y_i F_i  >= 0   (PSD, per block)
//
// with an infeasible-start primal-dual path-following method: Nesterov-Todd
// scaling, Mehrotra predictor-corrector, and a dense Schur-complement solve.
// Constraint matrices are kept as sparse symmetric entry lists, so the
// Schur matrix assembles in O(m^2 nnz^2) via the Gram identity
// Tr(F_i G F_j G) with G = R R^T the scaling-point factor product.
//
// Problem sizes in this project are tiny (total block dimension <= ~30,
// m <= ~150), so everything is dense and deterministic.

#pragma once

#include <vector>

#include "isac/numerics.hpp"

namespace isac::ipm {

/// One upper-triangle entry of a sparse symmetric matrix: the represented
/// matrix is sum of value * (E_rc + E_cr) for row < col and value * E_rr on
/// the diagonal.
struct Entry {
    int row;
    int col;
    double value;
};

/// Sparse symmetric block-diagonal matrix: one entry list per block.
using BlockSparse = std::vector<std::vector<Entry>>;

struct Problem {
    std::vector<int> dims;                  // block sizes
    BlockSparse f0;                         // constant term F0
    std::vector<BlockSparse> constraints;   // F_i, one per variable
    RVector b;                              // objective, maximize b^T y
};

struct Options {
    double tol = 1e-7;         // relative duality gap
    double feas_tol = 1e-9;    // primal/dual residual norms
    int max_iters = 200;
    double step_frac = 0.98;   // fraction of the step to the cone boundary
};

struct Result {
    RVector y;
    double dual_obj = 0.0;      // b^T y
    double primal_obj = 0.0;    // F0 . X of the internal primal iterate
    double rel_gap = 0.0;
    double primal_res = 0.0;
    double dual_res = 0.0;
    int iterations = 0;
    bool converged = false;
};

Result solve(const Problem& prob, const Options& opts = {});

} // namespace isac::ipm
