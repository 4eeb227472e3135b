// SPDX-License-Identifier: Apache-2.0
//
// Tensor Alternating Anderson–Richardson solver.
//
// The iteration tracks x^{[m-1]} and updates it with a preconditioned
// residual r = M(E)^{-1}(b − A x^{m-1}):
//
//   TR:   x_{k+1}^{[m-1]} = x_k^{[m-1]} + ω_k r_k,
//         ω_k = (b − A x_k^{m-1}, B u₁)/(B u₁, B u₁),
//         u₁ = r_k ./ x_k^{[m-2]},  B = A x_k^{m-2}
//
//   TAR:  x_{k+1}^{[m-1]} = x_k^{[m-1]} + [β_k I − (X_k + β_k R_k)(R_kᵀR_k)⁺R_kᵀ] r_k
//         with the window of the last l = min(q, k) iterate/residual
//         differences and β_k from the same quasi-residual minimization
//         (u₂ = XΓ ./ x^{[m-2]}, u₃ = (r − RΓ) ./ x^{[m-2]}).
//
// TAAR runs one TAR step after every p−1 TR steps. x is recovered from
// x^{[m-1]} by the sign-preserving real root, so transiently negative
// components keep the iteration real (they are flagged in the report).
//
// aar_linear_solve is the linear-system baseline the scheme generalizes
// (Jacobi preconditioner).

#pragma once

#include "mtaar/linalg.hpp"
#include "mtaar/solver.hpp"

namespace mtaar {

/// M(E) with its solve strategy precomputed: PJ diagonal of M(A), PGS its
/// lower-triangular part, PF the full matrix (LU-factored once).
struct Preconditioner {
  PrecondKind kind = PrecondKind::PF;
  DenseMatrix matrix;  // M(E)
  Vec diag;            // PJ fast path
  LUFactor lu;         // PF

  Vec solve(const Vec& c) const;
};

Preconditioner build_preconditioner(const DenseTensor& a, PrecondKind kind);

/// r(x) = M(E)^{-1}(b − A x^{m-1}).
Vec residual(const DenseTensor& a, const Vec& b, const Preconditioner& p, const Vec& x);

/// Ring buffer of the last q iterate/residual difference columns. Column
/// for iteration k (k ≥ 2) lives at (k−2) mod q; the active window is the
/// first `filled` columns in storage order (column order does not affect
/// the Anderson update).
struct HistoryWindow {
  int n = 0;
  int q = 0;
  int filled = 0;
  DenseMatrix x_diff;  // n×q
  DenseMatrix r_diff;  // n×q

  HistoryWindow() = default;
  HistoryWindow(int n_, int q_);
  void record(int k, const Vec& dx, const Vec& dr);
  DenseMatrix active_x() const;
  DenseMatrix active_r() const;
};

struct TaarState {
  Vec xm1;  // x_k^{[m-1]}, the primary variable
  Vec x;    // elementwise_pow(xm1, 1/(m-1)) at all times
  Vec r;    // preconditioned residual at x_k (valid when fresh)
  int k = 0;
  HistoryWindow window;

  Vec xm1_old;  // previous iterate / residual slots for the history
  Vec r_old;

  // per-iterate work cache, valid while `fresh`
  DenseMatrix b_mat;  // A x_k^{m-2}
  Vec resid;          // b − A x_k^{m-1}
  double resid_norm = 0.0;
  bool fresh = false;

  bool degenerate_flag = false;
  bool nonpositive_flag = false;
  int tr_steps = 0;
  int tar_steps = 0;
};

TaarState make_taar_state(const DenseTensor& a, const SolverConfig& cfg);

/// Recomputes B, the raw residual, and r for the current iterate.
void taar_refresh(const DenseTensor& a, const Vec& b, const Preconditioner& p, TaarState& st);

/// One TR update (refreshes if needed). A degenerate direction
/// ((B u₁, B u₁) underflow) leaves the iterate unchanged and sets the flag.
void tr_step(const DenseTensor& a, const Vec& b, const Preconditioner& p, TaarState& st);

/// One TAR update (refreshes if needed). An empty effective window reduces
/// to a TR-shaped step with β in place of ω; a degenerate (B u₃, B u₃) uses
/// β = 0 so the update degrades to x^{[m-1]} − XΓ.
void tar_step(const DenseTensor& a, const Vec& b, const Preconditioner& p, TaarState& st);

SolveReport taar_solve(const DenseTensor& a, const Vec& b, const SolverConfig& cfg, PrecondKind kind);

/// Alternating Anderson–Richardson for A x = b with the Jacobi
/// preconditioner; the m = 2 degeneration of taar_solve.
SolveReport aar_linear_solve(const DenseMatrix& a, const Vec& b, const SolverConfig& cfg);

}  // namespace mtaar
