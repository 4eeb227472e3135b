// SPDX-License-Identifier: Apache-2.0
//
// Small dense kernels backing the solvers: diagonal / triangular / LU
// solves, a pseudoinverse-based least-squares for the Anderson normal
// equations, and a bracketed scalar root finder for triangular tensor
// equations.

#pragma once

#include <span>

#include "mtaar/tensor.hpp"

namespace mtaar {

/// c ./ d componentwise; throws on an exactly zero diagonal entry.
Vec solve_diagonal(const Vec& d, const Vec& c);

/// Forward substitution with a square lower-triangular L.
Vec solve_lower_triangular(const DenseMatrix& l, const Vec& c);

/// LU factorization with partial pivoting. A pivot below 1e-14·‖A‖_∞ is
/// treated as singular.
struct LUFactor {
  int n = 0;
  DenseMatrix lu;          // L below the diagonal (unit), U on and above
  std::vector<int> perm;   // row permutation applied to the input

  static LUFactor factor(const DenseMatrix& a);
  Vec solve(const Vec& c) const;
};

Vec lu_solve(const DenseMatrix& a, const Vec& c);

/// Moore–Penrose pseudoinverse via one-sided Jacobi SVD. Singular values
/// below rel_cutoff·σ_max are dropped, so near-singular normal equations
/// (collinear residual differences) stay well-defined.
struct Pseudoinverse {
  int rows = 0;
  int cols = 0;
  int rank = 0;
  DenseMatrix u;   // rows × rank
  DenseMatrix v;   // cols × rank
  Vec sigma;       // rank retained singular values

  static Pseudoinverse compute(const DenseMatrix& a, double rel_cutoff = 1e-12);
  Vec apply(const Vec& y) const;       // V diag(1/σ) Uᵀ y
  DenseMatrix materialize() const;
};

/// Γ = (RᵀR)⁺ Rᵀ r, the Anderson mixing coefficients. Computed through the
/// normal equations with a pseudoinverse, matching the reference numerics
/// (column count is small, ≤ q).
Vec lstsq_gamma(const DenseMatrix& r_hist, const Vec& r);

/// Solve p(t) = target for the unique positive root, p given by ascending
/// coefficients. Brackets by doubling/halving from bracket_hint (at most
/// 200 steps each way), then bisection refined with safeguarded Newton
/// until |p(t) − target| ≤ 1e-12·max(1, |target|).
double positive_root(std::span<const double> coeffs, double target, double bracket_hint);

}  // namespace mtaar
