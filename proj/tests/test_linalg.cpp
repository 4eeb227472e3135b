// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "mtaar/linalg.hpp"
#include "mtaar/rng.hpp"

using namespace mtaar;

namespace {

DenseMatrix make_matrix(int n, std::initializer_list<double> vals) {
  DenseMatrix m(n, n);
  std::size_t k = 0;
  for (double v : vals) m.data[k++] = v;
  return m;
}

}  // namespace

TEST_CASE("solve_diagonal") {
  Vec x = solve_diagonal(Vec{2.0, 4.0}, Vec{6.0, 8.0});
  CHECK(x[0] == 3.0);
  CHECK(x[1] == 2.0);

  Vec c{0.3, -1.7, 2.5};
  Vec same = solve_diagonal(ones(3), c);
  for (int i = 0; i < 3; ++i) CHECK(same[std::size_t(i)] == c[std::size_t(i)]);

  CHECK_THROWS_AS(solve_diagonal(Vec{2.0, 0.0}, Vec{1.0, 1.0}), std::domain_error);
}

TEST_CASE("solve_lower_triangular") {
  DenseMatrix l = make_matrix(2, {2, 0, 1, 3});
  Vec x = solve_lower_triangular(l, Vec{4.0, 7.0});
  CHECK(x[0] == doctest::Approx(2.0));
  CHECK(x[1] == doctest::Approx(5.0 / 3.0));
  // multiply back
  Vec back = matvec(l, x);
  CHECK(back[0] == doctest::Approx(4.0));
  CHECK(back[1] == doctest::Approx(7.0));

  DenseMatrix id = make_matrix(2, {1, 0, 0, 1});
  Vec c{0.25, -3.0};
  Vec same = solve_lower_triangular(id, c);
  CHECK(same[0] == c[0]);
  CHECK(same[1] == c[1]);

  DenseMatrix bad = make_matrix(2, {2, 0, 1, 0});
  CHECK_THROWS_AS(solve_lower_triangular(bad, c), std::domain_error);
}

TEST_CASE("LU factor and solve") {
  Vec c{0.5, -2.0};
  Vec same = lu_solve(make_matrix(2, {1, 0, 0, 1}), c);
  CHECK(same[0] == doctest::Approx(0.5));
  CHECK(same[1] == doctest::Approx(-2.0));

  DenseMatrix a = make_matrix(2, {2, 1, 1, 3});
  Vec x = lu_solve(a, Vec{5.0, 10.0});
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(3.0));
  Vec back = matvec(a, x);
  CHECK(back[0] == doctest::Approx(5.0));
  CHECK(back[1] == doctest::Approx(10.0));

  CHECK_THROWS_AS(lu_solve(DenseMatrix(3, 3), c), std::domain_error);

  // P*A = L*U reconstruction on random matrices
  Xoshiro256pp rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + int(rng.next() % 8);
    DenseMatrix m(n, n);
    for (double& v : m.data) v = 2.0 * rng.uniform01() - 1.0;
    for (int i = 0; i < n; ++i) m(i, i) += double(n);  // keep well-conditioned
    LUFactor f = LUFactor::factor(m);
    double max_err = 0.0, max_ref = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double lu_ij = 0.0;
        for (int k = 0; k <= std::min(i, j); ++k) {
          const double lik = k == i ? 1.0 : f.lu(i, k);
          lu_ij += lik * f.lu(k, j);
        }
        const double pa = m(f.perm[std::size_t(i)], j);
        max_err = std::max(max_err, std::abs(pa - lu_ij));
        max_ref = std::max(max_ref, std::abs(pa));
      }
    CHECK(max_err <= 1e-10 * std::max(1.0, max_ref));
  }

  // lower-triangular inputs: LU solve and forward substitution agree
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + int(rng.next() % 6);
    DenseMatrix l(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) l(i, j) = 2.0 * rng.uniform01() - 1.0;
      l(i, i) = 1.0 + rng.uniform01();
    }
    Vec c2(std::size_t(n), 0.0);
    for (double& v : c2) v = 2.0 * rng.uniform01() - 1.0;
    Vec via_fs = solve_lower_triangular(l, c2);
    Vec via_lu = lu_solve(l, c2);
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(via_fs[std::size_t(i)] - via_lu[std::size_t(i)]) <=
            1e-10 * std::max(1.0, std::abs(via_lu[std::size_t(i)])));
  }
}

TEST_CASE("pseudoinverse") {
  Xoshiro256pp rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + int(rng.next() % 5);
    DenseMatrix a(n, n);
    for (double& v : a.data) v = 2.0 * rng.uniform01() - 1.0;
    for (int i = 0; i < n; ++i) a(i, i) += double(n);
    Pseudoinverse p = Pseudoinverse::compute(a);
    CHECK(p.rank == n);
    DenseMatrix pinv = p.materialize();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += pinv(i, k) * a(k, j);
        CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) <= 1e-8);
      }
  }

  // rank-deficient: duplicate columns are handled by the cutoff
  DenseMatrix dup(3, 2);
  for (int i = 0; i < 3; ++i) {
    dup(i, 0) = double(i + 1);
    dup(i, 1) = double(i + 1);
  }
  Pseudoinverse p = Pseudoinverse::compute(dup);
  CHECK(p.rank == 1);
}

TEST_CASE("lstsq_gamma examples and the brute-force oracle") {
  // single column equal to r: exact fit
  DenseMatrix r1(3, 1);
  Vec r{1.0, -2.0, 0.5};
  for (int i = 0; i < 3; ++i) r1(i, 0) = r[std::size_t(i)];
  Vec g = lstsq_gamma(r1, r);
  CHECK(g.size() == 1);
  CHECK(g[0] == doctest::Approx(1.0));

  // orthonormal columns: gamma = R^T r
  DenseMatrix q(3, 2);
  q(0, 0) = 1.0;
  q(1, 1) = 1.0;
  Vec g2 = lstsq_gamma(q, r);
  CHECK(g2[0] == doctest::Approx(1.0));
  CHECK(g2[1] == doctest::Approx(-2.0));

  // two identical columns with r in their span: the residual still vanishes
  DenseMatrix dup(3, 2);
  for (int i = 0; i < 3; ++i) dup(i, 0) = dup(i, 1) = double(i + 1);
  Vec rs{2.0, 4.0, 6.0};
  Vec gd = lstsq_gamma(dup, rs);
  Vec fit(3, 0.0);
  for (int i = 0; i < 3; ++i) fit[std::size_t(i)] = dup(i, 0) * gd[0] + dup(i, 1) * gd[1];
  CHECK(norm2(sub(rs, fit)) <= 1e-10);

  // coarse grid oracle on a small instance: our residual is at least as good
  Xoshiro256pp rng(19);
  DenseMatrix rr(4, 2);
  for (double& v : rr.data) v = 2.0 * rng.uniform01() - 1.0;
  Vec y(4, 0.0);
  for (double& v : y) v = 2.0 * rng.uniform01() - 1.0;
  Vec gamma = lstsq_gamma(rr, y);
  Vec best_fit(4, 0.0);
  for (int i = 0; i < 4; ++i) best_fit[std::size_t(i)] = rr(i, 0) * gamma[0] + rr(i, 1) * gamma[1];
  const double ours = norm2(sub(y, best_fit));
  double grid_best = norm2(y);
  for (double g0 = -3.0; g0 <= 3.0; g0 += 0.01)
    for (double g1 = -3.0; g1 <= 3.0; g1 += 0.01) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i) {
        const double d = y[std::size_t(i)] - rr(i, 0) * g0 - rr(i, 1) * g1;
        s += d * d;
      }
      grid_best = std::min(grid_best, std::sqrt(s));
    }
  CHECK(ours <= grid_best + 1e-8);

  // feasibility bound: never worse than gamma = 0
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + int(rng.next() % 6);
    const int l = 1 + int(rng.next() % std::min(4, n));
    DenseMatrix m(n, l);
    for (double& v : m.data) v = 2.0 * rng.uniform01() - 1.0;
    Vec t(std::size_t(n), 0.0);
    for (double& v : t) v = 2.0 * rng.uniform01() - 1.0;
    Vec gg = lstsq_gamma(m, t);
    Vec f(std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < l; ++j) f[std::size_t(i)] += m(i, j) * gg[std::size_t(j)];
    CHECK(norm2(sub(t, f)) <= norm2(t) + 1e-12);
  }
}

TEST_CASE("positive_root examples") {
  const double r1 = positive_root(std::vector<double>{0.0, 0.0, 1.0}, 9.0, 1.0);  // t^2 = 9
  CHECK(r1 == doctest::Approx(3.0));

  const double r2 = positive_root(std::vector<double>{0.0, -1.0, 0.0, 2.0}, 14.0, 1.0);  // 2t^3 - t = 14
  CHECK(r2 == doctest::Approx(2.0));
  CHECK(2.0 * r2 * r2 * r2 - r2 == doctest::Approx(14.0));

  CHECK_THROWS_AS(positive_root(std::vector<double>{0.0, 0.0, 1.0}, -1.0, 1.0), std::domain_error);
}

TEST_CASE("positive_root tolerance on randomized M-tensor-style polynomials") {
  Xoshiro256pp rng(37);
  for (int trial = 0; trial < 1000; ++trial) {
    const int deg = 2 + int(rng.next() % 3);  // m-1 in 2..4
    std::vector<double> coeffs(std::size_t(deg + 1), 0.0);
    coeffs[std::size_t(deg)] = 0.5 + rng.uniform01();          // positive leading
    for (int d = 0; d < deg; ++d) coeffs[std::size_t(d)] = -rng.uniform01();  // nonpositive below
    const double target = 0.01 + 10.0 * rng.uniform01();
    const double hint = 0.01 + 2.0 * rng.uniform01();
    const double t = positive_root(coeffs, target, hint);
    REQUIRE(t > 0.0);
    double p = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) p = p * t + coeffs[i];
    CHECK(std::abs(p - target) <= 1e-12 * std::max(1.0, std::abs(target)));
  }
}
