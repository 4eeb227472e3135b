// SPDX-License-Identifier: Apache-2.0

#include "mtaar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtaar {

Vec solve_diagonal(const Vec& d, const Vec& c) {
  if (d.size() != c.size()) throw std::invalid_argument("dimension-mismatch: solve_diagonal");
  Vec x(c.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 0.0) throw std::domain_error("zero-diagonal: d[" + std::to_string(i) + "] = 0");
    x[i] = c[i] / d[i];
  }
  return x;
}

Vec solve_lower_triangular(const DenseMatrix& l, const Vec& c) {
  if (l.rows != l.cols) throw std::invalid_argument("dimension-mismatch: L must be square");
  if (int(c.size()) != l.rows) throw std::invalid_argument("dimension-mismatch: solve_lower_triangular");
  const int n = l.rows;
  Vec x(c.size());
  for (int i = 0; i < n; ++i) {
    double s = c[std::size_t(i)];
    const double* row = l.data.data() + std::size_t(i) * n;
    for (int j = 0; j < i; ++j) s -= row[j] * x[std::size_t(j)];
    if (row[i] == 0.0) throw std::domain_error("zero-pivot: L(" + std::to_string(i) + "," + std::to_string(i) + ") = 0");
    x[std::size_t(i)] = s / row[i];
  }
  return x;
}

LUFactor LUFactor::factor(const DenseMatrix& a) {
  if (a.rows != a.cols) throw std::invalid_argument("dimension-mismatch: LU needs a square matrix");
  const int n = a.rows;
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) row_sum += std::abs(a(i, j));
    norm = std::max(norm, row_sum);
  }
  LUFactor f;
  f.n = n;
  f.lu = a;
  f.perm.resize(std::size_t(n));
  for (int i = 0; i < n; ++i) f.perm[std::size_t(i)] = i;
  const double pivot_floor = 1e-14 * norm;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(f.lu(k, k));
    for (int i = k + 1; i < n; ++i) {
      double v = std::abs(f.lu(i, k));
      if (v > best) { best = v; piv = i; }
    }
    if (best <= pivot_floor) throw std::domain_error("singular-matrix: pivot below 1e-14*norm at column " + std::to_string(k));
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
      std::swap(f.perm[std::size_t(k)], f.perm[std::size_t(piv)]);
    }
    const double pk = f.lu(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double m = f.lu(i, k) / pk;
      f.lu(i, k) = m;
      if (m != 0.0)
        for (int j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
    }
  }
  return f;
}

Vec LUFactor::solve(const Vec& c) const {
  if (int(c.size()) != n) throw std::invalid_argument("dimension-mismatch: LU solve");
  Vec y(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double s = c[std::size_t(perm[std::size_t(i)])];
    for (int j = 0; j < i; ++j) s -= lu(i, j) * y[std::size_t(j)];
    y[std::size_t(i)] = s;
  }
  Vec x(std::size_t(n), 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = y[std::size_t(i)];
    for (int j = i + 1; j < n; ++j) s -= lu(i, j) * x[std::size_t(j)];
    x[std::size_t(i)] = s / lu(i, i);
  }
  return x;
}

Vec lu_solve(const DenseMatrix& a, const Vec& c) { return LUFactor::factor(a).solve(c); }

Pseudoinverse Pseudoinverse::compute(const DenseMatrix& a, double rel_cutoff) {
  // One-sided Jacobi on the tall orientation; transpose back at the end.
  const bool transposed = a.rows < a.cols;
  int rows = a.rows, cols = a.cols;
  DenseMatrix w;
  if (transposed) {
    std::swap(rows, cols);
    w = DenseMatrix(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) w(i, j) = a(j, i);
  } else {
    w = a;
  }
  DenseMatrix v(cols, cols);
  for (int i = 0; i < cols; ++i) v(i, i) = 1.0;

  const double tol = 1e-14;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < cols - 1; ++p) {
      for (int q = p + 1; q < cols; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (int i = 0; i < rows; ++i) {
          app += w(i, p) * w(i, p);
          aqq += w(i, q) * w(i, q);
          apq += w(i, p) * w(i, q);
        }
        if (std::abs(apq) <= tol * std::sqrt(app * aqq) || apq == 0.0) continue;
        rotated = true;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (int i = 0; i < rows; ++i) {
          const double wp = w(i, p), wq = w(i, q);
          w(i, p) = cs * wp - sn * wq;
          w(i, q) = sn * wp + cs * wq;
        }
        for (int i = 0; i < cols; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = cs * vp - sn * vq;
          v(i, q) = sn * vp + cs * vq;
        }
      }
    }
    if (!rotated) break;
  }

  Vec all_sigma(std::size_t(cols), 0.0);
  double sigma_max = 0.0;
  for (int j = 0; j < cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += w(i, j) * w(i, j);
    all_sigma[std::size_t(j)] = std::sqrt(s);
    sigma_max = std::max(sigma_max, all_sigma[std::size_t(j)]);
  }
  const double cutoff = rel_cutoff * sigma_max;

  Pseudoinverse p;
  p.rows = transposed ? cols : rows;
  p.cols = transposed ? rows : cols;
  std::vector<int> keep;
  for (int j = 0; j < cols; ++j)
    if (all_sigma[std::size_t(j)] > cutoff && all_sigma[std::size_t(j)] > 0.0) keep.push_back(j);
  p.rank = int(keep.size());
  // In the working (tall) orientation: left vectors from w's columns, right
  // vectors from v. Swap roles when the input was transposed.
  DenseMatrix left(rows, p.rank), right(cols, p.rank);
  p.sigma.resize(std::size_t(p.rank));
  for (int r = 0; r < p.rank; ++r) {
    const int j = keep[std::size_t(r)];
    const double s = all_sigma[std::size_t(j)];
    p.sigma[std::size_t(r)] = s;
    for (int i = 0; i < rows; ++i) left(i, r) = w(i, j) / s;
    for (int i = 0; i < cols; ++i) right(i, r) = v(i, j);
  }
  if (transposed) {
    p.u = std::move(right);
    p.v = std::move(left);
  } else {
    p.u = std::move(left);
    p.v = std::move(right);
  }
  return p;
}

Vec Pseudoinverse::apply(const Vec& y) const {
  if (int(y.size()) != rows) throw std::invalid_argument("dimension-mismatch: pinv apply");
  Vec x(std::size_t(cols), 0.0);
  for (int r = 0; r < rank; ++r) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += u(i, r) * y[std::size_t(i)];
    s /= sigma[std::size_t(r)];
    for (int i = 0; i < cols; ++i) x[std::size_t(i)] += v(i, r) * s;
  }
  return x;
}

DenseMatrix Pseudoinverse::materialize() const {
  DenseMatrix m(cols, rows);
  for (int r = 0; r < rank; ++r)
    for (int i = 0; i < cols; ++i)
      for (int j = 0; j < rows; ++j) m(i, j) += v(i, r) * u(j, r) / sigma[std::size_t(r)];
  return m;
}

Vec lstsq_gamma(const DenseMatrix& r_hist, const Vec& r) {
  if (int(r.size()) != r_hist.rows) throw std::invalid_argument("dimension-mismatch: lstsq_gamma");
  const int l = r_hist.cols;
  if (l < 1) throw std::invalid_argument("dimension-mismatch: lstsq_gamma needs l >= 1");
  DenseMatrix g(l, l);
  Vec c(std::size_t(l), 0.0);
  for (int i = 0; i < l; ++i) {
    for (int j = i; j < l; ++j) {
      double s = 0.0;
      for (int k = 0; k < r_hist.rows; ++k) s += r_hist(k, i) * r_hist(k, j);
      g(i, j) = s;
      g(j, i) = s;
    }
    double s = 0.0;
    for (int k = 0; k < r_hist.rows; ++k) s += r_hist(k, i) * r[std::size_t(k)];
    c[std::size_t(i)] = s;
  }
  return Pseudoinverse::compute(g).apply(c);
}

namespace {

double horner(std::span<const double> coeffs, double t) {
  double v = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) v = v * t + coeffs[i];
  return v;
}

double horner_deriv(std::span<const double> coeffs, double t) {
  double v = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 1;) v = v * t + coeffs[i] * double(i);
  return v;
}

}  // namespace

double positive_root(std::span<const double> coeffs, double target, double bracket_hint) {
  const double ftol = 1e-12 * std::max(1.0, std::abs(target));
  double t0 = bracket_hint > 0.0 && std::isfinite(bracket_hint) ? bracket_hint : 1.0;
  double f0 = horner(coeffs, t0) - target;
  if (std::abs(f0) <= ftol) return t0;

  double lo = t0, hi = t0;
  if (f0 < 0.0) {
    bool found = false;
    for (int i = 0; i < 200; ++i) {
      hi *= 2.0;
      if (horner(coeffs, hi) - target >= 0.0) { found = true; break; }
      lo = hi;
    }
    if (!found) throw std::domain_error("no-bracket-found: no sign change above hint");
  } else {
    bool found = false;
    for (int i = 0; i < 200; ++i) {
      lo *= 0.5;
      if (horner(coeffs, lo) - target <= 0.0) { found = true; break; }
      hi = lo;
    }
    if (!found) throw std::domain_error("no-bracket-found: no sign change below hint");
  }

  // Bisection with a Newton candidate whenever it stays inside the bracket.
  double best_t = 0.5 * (lo + hi);
  double best_f = horner(coeffs, best_t) - target;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(best_f) <= ftol) return best_t;
    double t = best_t;
    const double d = horner_deriv(coeffs, t);
    double cand = d != 0.0 ? t - best_f / d : t;
    if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    const double fc = horner(coeffs, cand) - target;
    if (fc <= 0.0) lo = cand; else hi = cand;
    best_t = cand;
    best_f = fc;
    if (hi - lo <= 1e-16 * hi) break;
  }
  if (std::abs(best_f) <= ftol) return best_t;
  // Interval exhausted at double resolution; polish with a few plain Newton steps.
  for (int it = 0; it < 8 && std::abs(best_f) > ftol; ++it) {
    const double d = horner_deriv(coeffs, best_t);
    if (d == 0.0) break;
    best_t -= best_f / d;
    best_f = horner(coeffs, best_t) - target;
  }
  if (std::abs(best_f) > ftol) throw std::domain_error("root-solve-failed: tolerance not met");
  return best_t;
}

}  // namespace mtaar
