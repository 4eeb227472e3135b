// SPDX-License-Identifier: Apache-2.0

#include "mtaar/taar.hpp"

#include <cmath>
#include <stdexcept>

#include "mtaar/flops.hpp"
#include "solve_util.hpp"

namespace mtaar {

namespace {

using detail::StopTracker;
using detail::Stopwatch;

// Components of x^{[m-2]} below 1e-30 in magnitude are clamped (sign kept,
// +1e-30 for exact zeros) before ./-divisions; the paper assumes positive
// iterates and leaves the degenerate case unspecified.
Vec clamped_xm2(const Vec& x, int m) {
  Vec v = elementwise_pow(x, double(m - 2));
  for (double& c : v) {
    if (std::abs(c) < 1e-30) c = c < 0.0 ? -1e-30 : 1e-30;
  }
  return v;
}

constexpr double kDegenerate = 1e-300;

}  // namespace

Vec Preconditioner::solve(const Vec& c) const {
  switch (kind) {
    case PrecondKind::PJ: return hadamard_div(c, diag);
    case PrecondKind::PGS: return solve_lower_triangular(matrix, c);
    case PrecondKind::PF: return lu.solve(c);
  }
  throw std::logic_error("unreachable");
}

Preconditioner build_preconditioner(const DenseTensor& a, PrecondKind kind) {
  const DenseMatrix m = majorization_matrix(a);
  for (int i = 0; i < m.rows; ++i)
    if (m(i, i) == 0.0) throw std::domain_error("singular-preconditioner: zero diagonal entry in M(A)");
  Preconditioner p;
  p.kind = kind;
  switch (kind) {
    case PrecondKind::PJ:
      p.matrix = diag_part(m);
      p.diag = diagonal(m);
      break;
    case PrecondKind::PGS:
      p.matrix = tril(m);
      break;
    case PrecondKind::PF:
      p.matrix = m;
      p.lu = LUFactor::factor(m);
      break;
  }
  return p;
}

Vec residual(const DenseTensor& a, const Vec& b, const Preconditioner& p, const Vec& x) {
  return p.solve(sub(b, apply_xm1(a, x)));
}

HistoryWindow::HistoryWindow(int n_, int q_)
    : n(n_), q(q_), x_diff(n_, q_), r_diff(n_, q_) {}

void HistoryWindow::record(int k, const Vec& dx, const Vec& dr) {
  if (k < 2) throw std::logic_error("history columns exist only for k > 1");
  const int col = (k - 2) % q;
  for (int i = 0; i < n; ++i) {
    x_diff(i, col) = dx[std::size_t(i)];
    r_diff(i, col) = dr[std::size_t(i)];
  }
  filled = std::min(filled + 1, q);
}

DenseMatrix HistoryWindow::active_x() const {
  DenseMatrix m(n, filled);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < filled; ++j) m(i, j) = x_diff(i, j);
  return m;
}

DenseMatrix HistoryWindow::active_r() const {
  DenseMatrix m(n, filled);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < filled; ++j) m(i, j) = r_diff(i, j);
  return m;
}

TaarState make_taar_state(const DenseTensor& a, const SolverConfig& cfg) {
  TaarState st;
  st.x = detail::default_x0(cfg, a.dim());
  st.xm1 = elementwise_pow(st.x, double(a.order() - 1));
  st.window = HistoryWindow(a.dim(), cfg.q);
  return st;
}

void taar_refresh(const DenseTensor& a, const Vec& b, const Preconditioner& p, TaarState& st) {
  st.b_mat = apply_xm2(a, st.x);
  st.resid = sub(b, matvec(st.b_mat, st.x));
  st.resid_norm = norm2(st.resid);
  st.r = p.solve(st.resid);
  st.fresh = true;
}

namespace {

void tr_update(const DenseTensor& a, TaarState& st) {
  const int m = a.order();
  const Vec xm2 = clamped_xm2(st.x, m);
  const Vec u1 = hadamard_div(st.r, xm2);
  const Vec bu1 = matvec(st.b_mat, u1);
  const double den = dot(bu1, bu1);
  double omega = 0.0;
  if (den < kDegenerate) {
    st.degenerate_flag = true;  // step skipped
  } else {
    omega = dot(st.resid, bu1) / den;
  }
  axpy(omega, st.r, st.xm1);
  st.x = elementwise_pow(st.xm1, 1.0 / (m - 1));
  if (detail::any_nonpositive(st.x)) st.nonpositive_flag = true;
  st.fresh = false;
  ++st.tr_steps;
  ++st.k;
}

void tar_update(const DenseTensor& a, TaarState& st) {
  const int m = a.order();
  const Vec xm2 = clamped_xm2(st.x, m);
  const int n = a.dim();
  Vec xg(std::size_t(n), 0.0);
  Vec rg(std::size_t(n), 0.0);
  if (st.window.filled > 0) {
    const DenseMatrix rk = st.window.active_r();
    const DenseMatrix xk = st.window.active_x();
    const Vec gamma = lstsq_gamma(rk, st.r);
    xg = matvec(xk, gamma);
    rg = matvec(rk, gamma);
  }
  const Vec rbar = sub(st.r, rg);
  const Vec u2 = hadamard_div(xg, xm2);
  const Vec u3 = hadamard_div(rbar, xm2);
  const Vec bu3 = matvec(st.b_mat, u3);
  const double den = dot(bu3, bu3);
  double beta = 0.0;
  if (den < kDegenerate) {
    st.degenerate_flag = true;  // beta term vanishes; the XΓ correction stays
  } else {
    const Vec bu2 = matvec(st.b_mat, u2);
    beta = dot(add(st.resid, bu2), bu3) / den;
  }
  // x_{k+1}^{[m-1]} = x_k^{[m-1]} − XΓ + β (r − RΓ)
  axpy(-1.0, xg, st.xm1);
  axpy(beta, rbar, st.xm1);
  st.x = elementwise_pow(st.xm1, 1.0 / (m - 1));
  if (detail::any_nonpositive(st.x)) st.nonpositive_flag = true;
  st.fresh = false;
  ++st.tar_steps;
  ++st.k;
}

}  // namespace

void tr_step(const DenseTensor& a, const Vec& b, const Preconditioner& p, TaarState& st) {
  if (!st.fresh) taar_refresh(a, b, p, st);
  tr_update(a, st);
}

void tar_step(const DenseTensor& a, const Vec& b, const Preconditioner& p, TaarState& st) {
  if (!st.fresh) taar_refresh(a, b, p, st);
  tar_update(a, st);
}

SolveReport taar_solve(const DenseTensor& a, const Vec& b, const SolverConfig& cfg, PrecondKind kind) {
  validate_config(cfg);
  const int n = a.dim();
  const int m = a.order();
  if (int(b.size()) != n) throw std::invalid_argument("invalid-problem: b length mismatch");
  detail::require_mtensor(a);
  detail::require_positive(b, "b");
  {
    const Vec x0 = detail::default_x0(cfg, n);
    detail::require_positive(x0, "x0");
  }
  // method TR means the Anderson branch never fires
  const bool pure_tr = cfg.method == Method::TR;
  const Preconditioner p = build_preconditioner(a, kind);
  TaarState st = make_taar_state(a, cfg);

  const long long per_iter = flops_per_iteration(Method::TAAR, m, n, kind);
  StopTracker stop{cfg.stopping_mode, cfg.tol};
  Stopwatch clock;
  SolveReport rep;
  rep.cumulative_flops.push_back(0);
  if (cfg.record_iterates) rep.iterates.push_back(st.x);
  while (true) {
    taar_refresh(a, b, p, st);
    const double meas = stop.measure(st.resid_norm);
    rep.residual_history.push_back(meas);
    rep.wall_ms.push_back(clock.seconds() * 1e3);
    if (stop.satisfied(meas)) { rep.converged = true; break; }
    if (st.k >= cfg.max_iter) break;

    if (st.k > 1) st.window.record(st.k, sub(st.xm1, st.xm1_old), sub(st.r, st.r_old));
    st.xm1_old = st.xm1;
    st.r_old = st.r;

    if (pure_tr || (st.k + 1) % cfg.p != 0) {
      tr_update(a, st);
    } else {
      tar_update(a, st);
    }
    if (cfg.record_iterates) rep.iterates.push_back(st.x);
    rep.cumulative_flops.push_back(rep.cumulative_flops.back() + per_iter);
  }
  rep.iterations = st.k;
  rep.solution = st.x;
  rep.nonpositive_iterate_flag = st.nonpositive_flag;
  rep.degenerate_step_flag = st.degenerate_flag;
  rep.tr_steps = st.tr_steps;
  rep.tar_steps = st.tar_steps;
  rep.wall_time_s = clock.seconds();
  return rep;
}

SolveReport aar_linear_solve(const DenseMatrix& a, const Vec& b, const SolverConfig& cfg) {
  validate_config(cfg);
  const int n = a.rows;
  if (a.rows != a.cols) throw std::invalid_argument("invalid-problem: matrix must be square");
  if (int(b.size()) != n) throw std::invalid_argument("invalid-problem: b length mismatch");
  Vec d = diagonal(a);
  for (double v : d)
    if (v == 0.0) throw std::domain_error("zero-diagonal: Jacobi preconditioner needs nonzero diagonal");

  Vec x = detail::default_x0(cfg, n);
  HistoryWindow window(n, cfg.q);
  Vec x_old, r_old;

  const long long per_iter = flops_per_iteration(Method::AARLinear, 2, n);
  StopTracker stop{cfg.stopping_mode, cfg.tol};
  Stopwatch clock;
  SolveReport rep;
  rep.cumulative_flops.push_back(0);
  if (cfg.record_iterates) rep.iterates.push_back(x);
  bool degenerate = false;
  int k = 0;
  while (true) {
    const Vec resid = sub(b, matvec(a, x));
    const double meas = stop.measure(norm2(resid));
    rep.residual_history.push_back(meas);
    rep.wall_ms.push_back(clock.seconds() * 1e3);
    if (stop.satisfied(meas)) { rep.converged = true; break; }
    if (k >= cfg.max_iter) break;

    const Vec r = hadamard_div(resid, d);
    if (k > 1) window.record(k, sub(x, x_old), sub(r, r_old));
    x_old = x;
    r_old = r;

    if ((k + 1) % cfg.p != 0) {
      const Vec ar = matvec(a, r);
      const double den = dot(ar, ar);
      double omega = 0.0;
      if (den < kDegenerate) degenerate = true;
      else omega = dot(resid, ar) / den;
      axpy(omega, r, x);
    } else {
      Vec xbar = x;
      if (window.filled > 0) {
        const DenseMatrix rk = window.active_r();
        const Vec gamma = lstsq_gamma(rk, r);
        const Vec xg = matvec(window.active_x(), gamma);
        xbar = sub(x, xg);
      }
      const Vec resid_bar = sub(b, matvec(a, xbar));
      const Vec rbar = hadamard_div(resid_bar, d);
      const Vec arbar = matvec(a, rbar);
      const double den = dot(arbar, arbar);
      double beta = 0.0;
      if (den < kDegenerate) degenerate = true;
      else beta = dot(resid_bar, arbar) / den;
      x = xbar;
      axpy(beta, rbar, x);
    }
    if (cfg.record_iterates) rep.iterates.push_back(x);
    rep.cumulative_flops.push_back(rep.cumulative_flops.back() + per_iter);
    ++k;
  }
  rep.iterations = k;
  rep.solution = std::move(x);
  rep.degenerate_step_flag = degenerate;
  rep.wall_time_s = clock.seconds();
  return rep;
}

}  // namespace mtaar
