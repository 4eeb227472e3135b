// SPDX-License-Identifier: Apache-2.0

#include "mtaar/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mtaar/flops.hpp"
#include "mtaar/linalg.hpp"
#include "solve_util.hpp"

namespace mtaar {

namespace {

using detail::StopTracker;
using detail::Stopwatch;

enum class SplitKind { Diag, Lower, Full };

// y_i = Σ_{j ≤ i} L(i,j) v_j
Vec tril_matvec(const DenseMatrix& l, const Vec& v) {
  const int n = l.rows;
  Vec y(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = l.data.data() + std::size_t(i) * n;
    double s = 0.0;
    for (int j = 0; j <= i; ++j) s += row[j] * v[std::size_t(j)];
    y[std::size_t(i)] = s;
  }
  return y;
}

// F = M(E)·I − A must be nonnegative (entries below −1e-12 reject the
// splitting). Positions (i, j, j, ..., j) carry M(E)_{ij} − a, all others −a.
void check_regular_splitting(const DenseTensor& a, const DenseMatrix& me, SplitKind kind) {
  const int m = a.order();
  const int n = a.dim();
  std::vector<int> idx(std::size_t(m), 0);
  std::size_t flat = 0;
  const double tol = 1e-12;
  do {
    bool spine = true;
    for (int k = 2; k < m; ++k)
      if (idx[std::size_t(k)] != idx[1]) { spine = false; break; }
    const double aval = a[flat];
    if (spine) {
      const int i = idx[0], j = m >= 2 ? idx[1] : idx[0];
      double mev = 0.0;
      switch (kind) {
        case SplitKind::Diag: mev = i == j ? me(i, i) : 0.0; break;
        case SplitKind::Lower: mev = j <= i ? me(i, j) : 0.0; break;
        case SplitKind::Full: mev = me(i, j); break;
      }
      if (mev - aval < -tol) throw std::domain_error("nonregular-splitting: F has a negative entry");
    } else if (aval > tol) {
      throw std::domain_error("nonregular-splitting: F has a negative entry");
    }
    ++flat;
  } while ([&] {
    for (int pos = m - 1; pos >= 0; --pos) {
      if (++idx[std::size_t(pos)] < n) return true;
      idx[std::size_t(pos)] = 0;
    }
    return false;
  }());
}

// One engine for J1/J3 (diagonal), GS3 (lower-triangular) and FULLM (full):
//   x_{k+1} = [ M(E)^{-1} (b + F x_k^{m-1}) ]^{[1/(m-1)]},
// with F x^{m-1} evaluated as M(E)·x^{[m-1]} − A x^{m-1}.
SolveReport matrix_splitting_driver(const DenseTensor& a, const Vec& b, const SolverConfig& cfg,
                                    SplitKind kind, Method method) {
  validate_config(cfg);
  const int n = a.dim();
  const int m = a.order();
  if (int(b.size()) != n) throw std::invalid_argument("invalid-problem: b length mismatch");
  detail::require_mtensor(a);
  detail::require_positive(b, "b");
  Vec x = detail::default_x0(cfg, n);
  detail::require_positive(x, "x0");

  const DenseMatrix mmat = majorization_matrix(a);
  check_regular_splitting(a, mmat, kind);
  Vec d;
  DenseMatrix lmat;
  LUFactor lu;
  switch (kind) {
    case SplitKind::Diag:
      d = diagonal(mmat);
      for (double v : d)
        if (v == 0.0) throw std::domain_error("zero-diagonal: M(A) has a zero diagonal entry");
      break;
    case SplitKind::Lower:
      lmat = tril(mmat);
      break;
    case SplitKind::Full:
      lu = LUFactor::factor(mmat);
      break;
  }

  const long long per_iter = flops_per_iteration(method, m, n);
  const double root = 1.0 / (m - 1);
  StopTracker stop{cfg.stopping_mode, cfg.tol};
  Stopwatch clock;
  SolveReport rep;
  rep.cumulative_flops.push_back(0);
  if (cfg.record_iterates) rep.iterates.push_back(x);
  int k = 0;
  while (true) {
    const Vec ax = apply_xm1(a, x);
    const double meas = stop.measure(norm2(sub(b, ax)));
    rep.residual_history.push_back(meas);
    rep.wall_ms.push_back(clock.seconds() * 1e3);
    if (stop.satisfied(meas)) { rep.converged = true; break; }
    if (k >= cfg.max_iter) break;

    const Vec xm1 = elementwise_pow(x, double(m - 1));
    Vec me_xm1;
    switch (kind) {
      case SplitKind::Diag: me_xm1 = hadamard(d, xm1); break;
      case SplitKind::Lower: me_xm1 = tril_matvec(lmat, xm1); break;
      case SplitKind::Full: me_xm1 = matvec(mmat, xm1); break;
    }
    const Vec rhs = add(sub(me_xm1, ax), b);
    Vec y;
    switch (kind) {
      case SplitKind::Diag: y = solve_diagonal(d, rhs); break;
      case SplitKind::Lower: y = solve_lower_triangular(lmat, rhs); break;
      case SplitKind::Full: y = lu.solve(rhs); break;
    }
    x = elementwise_pow(y, root);
    if (detail::any_nonpositive(x)) rep.nonpositive_iterate_flag = true;
    if (cfg.record_iterates) rep.iterates.push_back(x);
    rep.cumulative_flops.push_back(rep.cumulative_flops.back() + per_iter);
    ++k;
  }
  rep.iterations = k;
  rep.solution = std::move(x);
  rep.wall_time_s = clock.seconds();
  return rep;
}

// Coefficients (ascending in t) of the i-th row of the lower-triangular part
// applied to x with x_i treated as the unknown t:
//   p(t) = Σ_{i2..im ≤ i} a_{i i2..im} · Π_{j: tail_j < i} x_{tail_j} · t^{#(tail_j = i)}
std::vector<double> row_polynomial(const DenseTensor& a, int i, const Vec& x) {
  const int m = a.order();
  const int n = a.dim();
  std::vector<double> coeffs(std::size_t(m), 0.0);  // degrees 0..m-1
  std::vector<int> tail(std::size_t(m - 1), 0);
  const std::size_t row_base = std::size_t(i) * a.size() / std::size_t(n);
  while (true) {
    int deg = 0;
    double prod = 1.0;
    std::size_t off = 0;
    for (int kpos = 0; kpos < m - 1; ++kpos) {
      const int v = tail[std::size_t(kpos)];
      deg += v == i;
      if (v != i) prod *= x[std::size_t(v)];
      off = off * std::size_t(n) + std::size_t(v);
    }
    const double av = a[row_base + off];
    if (av != 0.0) coeffs[std::size_t(deg)] += av * prod;
    // odometer over digits 0..i
    int pos = m - 2;
    for (; pos >= 0; --pos) {
      if (++tail[std::size_t(pos)] <= i) break;
      tail[std::size_t(pos)] = 0;
    }
    if (pos < 0) break;
  }
  return coeffs;
}

double eval_poly(const std::vector<double>& coeffs, double t) {
  double v = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) v = v * t + coeffs[i];
  return v;
}

// GS1 and GS1_SORlike share the forward per-coordinate root solve; omega = 0
// recovers GS1.
SolveReport gs1_driver(const DenseTensor& a, const Vec& b, const SolverConfig& cfg, double omega,
                       Method method) {
  validate_config(cfg);
  const int n = a.dim();
  const int m = a.order();
  if (int(b.size()) != n) throw std::invalid_argument("invalid-problem: b length mismatch");
  detail::require_mtensor(a);
  detail::require_positive(b, "b");
  Vec x = detail::default_x0(cfg, n);
  detail::require_positive(x, "x0");

  const long long per_iter = flops_per_iteration(method, m, n);
  StopTracker stop{cfg.stopping_mode, cfg.tol};
  Stopwatch clock;
  SolveReport rep;
  rep.cumulative_flops.push_back(0);
  if (cfg.record_iterates) rep.iterates.push_back(x);
  int k = 0;
  while (true) {
    const Vec ax = apply_xm1(a, x);
    const double meas = stop.measure(norm2(sub(b, ax)));
    rep.residual_history.push_back(meas);
    rep.wall_ms.push_back(clock.seconds() * 1e3);
    if (stop.satisfied(meas)) { rep.converged = true; break; }
    if (k >= cfg.max_iter) break;

    // rhs_i = ((N − ωI) x_k^{m-1} + b)_i with N = L − A:
    //       = (L x_k^{m-1})_i − ω x_{k,i}^{m-1} − (A x_k^{m-1})_i + b_i
    Vec xn(std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i) {
      std::vector<double> c_old = row_polynomial(a, i, x);
      const double lx_old = eval_poly(c_old, x[std::size_t(i)]);
      const double target = lx_old - omega * std::pow(x[std::size_t(i)], double(m - 1)) -
                            ax[std::size_t(i)] + b[std::size_t(i)];
      std::vector<double> c_new = row_polynomial(a, i, xn);
      c_new[std::size_t(m - 1)] -= omega;
      try {
        xn[std::size_t(i)] = positive_root(c_new, target, x[std::size_t(i)]);
      } catch (const std::domain_error& e) {
        throw std::domain_error(std::string("root-solve-failed: coordinate ") + std::to_string(i) +
                                ": " + e.what());
      }
    }
    x = std::move(xn);
    if (detail::any_nonpositive(x)) rep.nonpositive_iterate_flag = true;
    if (cfg.record_iterates) rep.iterates.push_back(x);
    rep.cumulative_flops.push_back(rep.cumulative_flops.back() + per_iter);
    ++k;
  }
  rep.iterations = k;
  rep.solution = std::move(x);
  rep.wall_time_s = clock.seconds();
  return rep;
}

SolveReport sor_diag_driver(const DenseTensor& a, const Vec& b, const SolverConfig& cfg, double omega,
                            Method method) {
  validate_config(cfg);
  const int n = a.dim();
  const int m = a.order();
  if (int(b.size()) != n) throw std::invalid_argument("invalid-problem: b length mismatch");
  detail::require_mtensor(a);
  detail::require_positive(b, "b");
  Vec x = detail::default_x0(cfg, n);
  detail::require_positive(x, "x0");

  Vec dw = diagonal(majorization_matrix(a));
  for (double& v : dw) v -= omega;
  for (double v : dw)
    if (v == 0.0) throw std::domain_error("zero-diagonal: a_ii...i - omega = 0");

  const long long per_iter = flops_per_iteration(method, m, n);
  const double root = 1.0 / (m - 1);
  StopTracker stop{cfg.stopping_mode, cfg.tol};
  Stopwatch clock;
  SolveReport rep;
  rep.cumulative_flops.push_back(0);
  if (cfg.record_iterates) rep.iterates.push_back(x);
  int k = 0;
  while (true) {
    const Vec ax = apply_xm1(a, x);
    const double meas = stop.measure(norm2(sub(b, ax)));
    rep.residual_history.push_back(meas);
    rep.wall_ms.push_back(clock.seconds() * 1e3);
    if (stop.satisfied(meas)) { rep.converged = true; break; }
    if (k >= cfg.max_iter) break;

    const Vec xm1 = elementwise_pow(x, double(m - 1));
    const Vec rhs = add(sub(hadamard(dw, xm1), ax), b);
    x = elementwise_pow(solve_diagonal(dw, rhs), root);
    if (detail::any_nonpositive(x)) rep.nonpositive_iterate_flag = true;
    if (cfg.record_iterates) rep.iterates.push_back(x);
    rep.cumulative_flops.push_back(rep.cumulative_flops.back() + per_iter);
    ++k;
  }
  rep.iterations = k;
  rep.solution = std::move(x);
  rep.wall_time_s = clock.seconds();
  return rep;
}

// J2 / GS2: x_{k+1} = x_k + (1/(m−1)) (part(A x_k^{m-2}))^{-1} (b − A x_k^{m-1}),
// with the diagonal-face / lower-half parts reducing to diag / tril of A x^{m-2}.
SolveReport method2_driver(const DenseTensor& a, const Vec& b, const SolverConfig& cfg, bool lower,
                           Method method) {
  validate_config(cfg);
  const int n = a.dim();
  const int m = a.order();
  if (int(b.size()) != n) throw std::invalid_argument("invalid-problem: b length mismatch");
  detail::require_positive(b, "b");
  Vec x = detail::default_x0(cfg, n);

  const long long per_iter = flops_per_iteration(method, m, n);
  StopTracker stop{cfg.stopping_mode, cfg.tol};
  Stopwatch clock;
  SolveReport rep;
  rep.cumulative_flops.push_back(0);
  if (cfg.record_iterates) rep.iterates.push_back(x);
  const double scale = 1.0 / (m - 1);
  int k = 0;
  while (true) {
    const DenseMatrix bm = apply_xm2(a, x);
    const Vec ax = matvec(bm, x);
    const Vec resid = sub(b, ax);
    const double meas = stop.measure(norm2(resid));
    rep.residual_history.push_back(meas);
    rep.wall_ms.push_back(clock.seconds() * 1e3);
    if (stop.satisfied(meas)) { rep.converged = true; break; }
    if (k >= cfg.max_iter) break;

    Vec delta = lower ? solve_lower_triangular(tril(bm), resid) : solve_diagonal(diagonal(bm), resid);
    axpy(scale, delta, x);
    if (detail::any_nonpositive(x)) rep.nonpositive_iterate_flag = true;
    if (cfg.record_iterates) rep.iterates.push_back(x);
    rep.cumulative_flops.push_back(rep.cumulative_flops.back() + per_iter);
    ++k;
  }
  rep.iterations = k;
  rep.solution = std::move(x);
  rep.wall_time_s = clock.seconds();
  return rep;
}

double sor_omega(const DenseTensor& a, const SolverConfig& cfg) {
  if (cfg.omega) return *cfg.omega;
  const Vec d = diagonal(majorization_matrix(a));
  return 0.35 * *std::min_element(d.begin(), d.end());
}

}  // namespace

SolveReport solve_j1(const DenseTensor& a, const Vec& b, const SolverConfig& cfg) {
  return matrix_splitting_driver(a, b, cfg, SplitKind::Diag, Method::J1);
}

SolveReport solve_j3(const DenseTensor& a, const Vec& b, const SolverConfig& cfg) {
  return matrix_splitting_driver(a, b, cfg, SplitKind::Diag, Method::J3);
}

SolveReport solve_gs3(const DenseTensor& a, const Vec& b, const SolverConfig& cfg) {
  return matrix_splitting_driver(a, b, cfg, SplitKind::Lower, Method::GS3);
}

SolveReport solve_fullm(const DenseTensor& a, const Vec& b, const SolverConfig& cfg) {
  return matrix_splitting_driver(a, b, cfg, SplitKind::Full, Method::FULLM);
}

SolveReport solve_gs1(const DenseTensor& a, const Vec& b, const SolverConfig& cfg) {
  return gs1_driver(a, b, cfg, 0.0, Method::GS1);
}

SolveReport solve_sorlike(const DenseTensor& a, const Vec& b, const SolverConfig& cfg, SorSplit m_part) {
  const double omega = sor_omega(a, cfg);
  return m_part == SorSplit::Diagonal ? sor_diag_driver(a, b, cfg, omega, Method::J1SORlike)
                                      : gs1_driver(a, b, cfg, omega, Method::GS1SORlike);
}

SolveReport solve_newton_symmetric(const DenseTensor& a, const Vec& b, const SolverConfig& cfg) {
  validate_config(cfg);
  const int n = a.dim();
  const int m = a.order();
  if (int(b.size()) != n) throw std::invalid_argument("invalid-problem: b length mismatch");
  if (!is_symmetric(a)) throw std::invalid_argument("invalid-problem: Newton requires a symmetric tensor");
  Vec x = detail::default_x0(cfg, n);

  const long long per_iter = flops_per_iteration(Method::Newton, m, n);
  StopTracker stop{cfg.stopping_mode, cfg.tol};
  Stopwatch clock;
  SolveReport rep;
  rep.cumulative_flops.push_back(0);
  if (cfg.record_iterates) rep.iterates.push_back(x);
  int k = 0;
  while (true) {
    const DenseMatrix mk = apply_xm2(a, x);
    const Vec ax = matvec(mk, x);
    const double meas = stop.measure(norm2(sub(b, ax)));
    rep.residual_history.push_back(meas);
    rep.wall_ms.push_back(clock.seconds() * 1e3);
    if (stop.satisfied(meas)) { rep.converged = true; break; }
    if (k >= cfg.max_iter) break;

    if (detail::any_nonpositive(x) || detail::any_nonpositive(ax))
      rep.nonpositive_iterate_flag = true;  // iterate left Omega; not fatal
    const Vec rhs = add(scaled(ax, double(m - 2) / (m - 1)), scaled(b, 1.0 / (m - 1)));
    x = LUFactor::factor(mk).solve(rhs);
    if (cfg.record_iterates) rep.iterates.push_back(x);
    rep.cumulative_flops.push_back(rep.cumulative_flops.back() + per_iter);
    ++k;
  }
  rep.iterations = k;
  rep.solution = std::move(x);
  rep.wall_time_s = clock.seconds();
  return rep;
}

SolveReport solve_j2(const DenseTensor& a, const Vec& b, const SolverConfig& cfg) {
  return method2_driver(a, b, cfg, /*lower=*/false, Method::J2);
}

SolveReport solve_gs2(const DenseTensor& a, const Vec& b, const SolverConfig& cfg) {
  return method2_driver(a, b, cfg, /*lower=*/true, Method::GS2);
}

}  // namespace mtaar
