// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <array>
#include <cmath>

#include "mtaar/problems.hpp"
#include "mtaar/rng.hpp"
#include "mtaar/splitting.hpp"
#include "mtaar/taar.hpp"

using namespace mtaar;

namespace {

// symmetric-slice worked example from the tensor tests
DenseTensor worked_example() {
  DenseTensor a(3, 3);
  std::array<int, 3> idx{};
  for (idx[0] = 0; idx[0] < 3; ++idx[0])
    for (idx[1] = 0; idx[1] < 3; ++idx[1])
      for (idx[2] = 0; idx[2] < 3; ++idx[2])
        a.at(idx) = double(9 * idx[2] + 3 * idx[0] + idx[1] + 1);
  return a;
}

DenseTensor random_mmatrix_as_tensor(int n, std::uint64_t seed, double margin) {
  Xoshiro256pp rng(seed);
  DenseTensor a(2, n);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = rng.uniform_open01();
  Vec rs = apply_xm1(a, ones(n));
  const double s = (1.0 + margin) * *std::max_element(rs.begin(), rs.end());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = -a[i];
  for (int i = 0; i < n; ++i) a[std::size_t(i) * std::size_t(n + 1)] += s;
  return a;
}

}  // namespace

TEST_CASE("preconditioner matrices for the worked example") {
  DenseTensor a = worked_example();
  Preconditioner pgs = build_preconditioner(a, PrecondKind::PGS);
  const double want_l[3][3] = {{1, 0, 0}, {4, 14, 0}, {7, 17, 27}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(pgs.matrix(i, j) == want_l[i][j]);

  Preconditioner pf = build_preconditioner(a, PrecondKind::PF);
  const double want_f[3][3] = {{1, 11, 21}, {4, 14, 24}, {7, 17, 27}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(pf.matrix(i, j) == want_f[i][j]);

  for (PrecondKind k : {PrecondKind::PJ, PrecondKind::PGS, PrecondKind::PF}) {
    Preconditioner p = build_preconditioner(identity_tensor(3, 4), k);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(p.matrix(i, j) == (i == j ? 1.0 : 0.0));
  }

  DenseTensor zero_diag(3, 2);
  CHECK_THROWS_AS(build_preconditioner(zero_diag, PrecondKind::PJ), std::domain_error);
}

TEST_CASE("PF inverse of an M-tensor majorization matrix is entrywise nonnegative") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    ProblemInstance inst = gen_random_mtensor(3, 9, 0.1, seed);
    Preconditioner pf = build_preconditioner(inst.A, PrecondKind::PF);
    for (int j = 0; j < 9; ++j) {
      Vec e(9, 0.0);
      e[std::size_t(j)] = 1.0;
      Vec col = pf.solve(e);
      for (double v : col) CHECK(v >= -1e-10);
    }
  }
}

TEST_CASE("residual operation") {
  DenseTensor id = identity_tensor(3, 2);
  Preconditioner pj = build_preconditioner(id, PrecondKind::PJ);
  Vec b{4.0, 9.0};
  Vec r = residual(id, b, pj, Vec{1.5, 2.5});
  CHECK(r[0] == doctest::Approx(4.0 - 2.25));
  CHECK(r[1] == doctest::Approx(9.0 - 6.25));

  Vec at_solution = residual(id, b, pj, Vec{2.0, 3.0});
  CHECK(norm2(at_solution) <= 1e-12 * norm2(b));

  // PF residual equals the direct LU route (multiply-back oracle)
  ProblemInstance inst = gen_random_mtensor(3, 3, 0.3, 8);
  Preconditioner pf = build_preconditioner(inst.A, PrecondKind::PF);
  Vec x{0.2, 0.4, 0.1};
  Vec rr = residual(inst.A, inst.b, pf, x);
  Vec back = matvec(pf.matrix, rr);
  Vec direct = sub(inst.b, apply_xm1(inst.A, x));
  for (int i = 0; i < 3; ++i)
    CHECK(back[std::size_t(i)] == doctest::Approx(direct[std::size_t(i)]).epsilon(1e-10));
}

TEST_CASE("one TR step solves the identity system") {
  DenseTensor id = identity_tensor(3, 2);
  Vec b{4.0, 9.0};
  Preconditioner pj = build_preconditioner(id, PrecondKind::PJ);
  SolverConfig cfg;
  cfg.x0 = Vec{0.5, 0.7};
  TaarState st = make_taar_state(id, cfg);
  tr_step(id, b, pj, st);
  CHECK(st.k == 1);
  CHECK(norm2(sub(apply_xm1(id, st.x), b)) <= 1e-12 * norm2(b));
}

TEST_CASE("TR at the exact solution degenerates to a zero step") {
  DenseTensor id = identity_tensor(3, 2);
  Vec b{4.0, 9.0};
  Preconditioner pj = build_preconditioner(id, PrecondKind::PJ);
  SolverConfig cfg;
  cfg.x0 = Vec{2.0, 3.0};
  TaarState st = make_taar_state(id, cfg);
  const Vec before = st.xm1;
  tr_step(id, b, pj, st);
  CHECK(st.degenerate_flag);
  CHECK(norm_inf(sub(st.xm1, before)) == 0.0);
}

TEST_CASE("TAR with an exact-fit window reduces to the XG correction") {
  ProblemInstance inst = gen_random_mtensor(3, 4, 0.3, 15);
  Preconditioner pf = build_preconditioner(inst.A, PrecondKind::PF);
  SolverConfig cfg;
  cfg.x0 = inst.x0;
  TaarState st = make_taar_state(inst.A, cfg);
  taar_refresh(inst.A, inst.b, pf, st);
  const Vec r = st.r;
  Vec dx{0.01, -0.02, 0.03, 0.04};
  st.window.record(2, dx, r);  // single column R = r: gamma = 1, rbar = 0
  const Vec before = st.xm1;
  tar_step(inst.A, inst.b, pf, st);
  CHECK(st.degenerate_flag);  // (B u3, B u3) underflows at rbar = 0
  Vec expect = sub(before, dx);
  CHECK(norm_inf(sub(st.xm1, expect)) <= 1e-10 * std::max(1.0, norm_inf(expect)));
}

TEST_CASE("TAR with an empty window is a TR-shaped step") {
  ProblemInstance inst = gen_random_mtensor(3, 4, 0.3, 16);
  Preconditioner pf = build_preconditioner(inst.A, PrecondKind::PF);
  SolverConfig cfg;
  cfg.x0 = inst.x0;
  TaarState a = make_taar_state(inst.A, cfg);
  TaarState b = make_taar_state(inst.A, cfg);
  tr_step(inst.A, inst.b, pf, a);
  tar_step(inst.A, inst.b, pf, b);  // filled = 0
  CHECK(norm_inf(sub(a.xm1, b.xm1)) == 0.0);
}

TEST_CASE("history window ring indexing") {
  HistoryWindow w(2, 3);
  for (int k = 2; k <= 9; ++k) {
    Vec dx{double(k), double(k)};
    Vec dr{double(-k), double(-k)};
    w.record(k, dx, dr);
  }
  CHECK(w.filled == 3);
  // column (k-2) mod 3: k=9 -> col 1, k=8 -> col 0, k=7 -> col 2
  CHECK(w.x_diff(0, 1) == 9.0);
  CHECK(w.x_diff(0, 0) == 8.0);
  CHECK(w.x_diff(0, 2) == 7.0);
  CHECK(w.r_diff(0, 1) == -9.0);
}

TEST_CASE("taar_solve on the sine family stays within the reference cap") {
  ProblemInstance inst = gen_sine_symmetric(50);
  SolverConfig cfg;
  cfg.x0 = inst.x0;
  SolveReport rep = taar_solve(inst.A, inst.b, cfg, PrecondKind::PF);
  CHECK(rep.converged);
  CHECK(rep.iterations <= 12);
}

TEST_CASE("TR residuals decrease over the first steps on a random instance") {
  ProblemInstance inst = gen_random_mtensor(3, 50, 0.01, 200);
  SolverConfig cfg;
  cfg.x0 = inst.x0;
  cfg.method = Method::TR;
  cfg.max_iter = 9;
  SolveReport rep = taar_solve(inst.A, inst.b, cfg, PrecondKind::PF);
  for (std::size_t k = 0; k + 1 < rep.residual_history.size(); ++k)
    CHECK(rep.residual_history[k + 1] <= rep.residual_history[k] * (1.0 + 1e-12));
}

TEST_CASE("preconditioner kinds agree at convergence and match FULLM") {
  ProblemInstance inst = gen_random_mtensor(3, 15, 0.05, 12);
  SolverConfig cfg;
  cfg.x0 = inst.x0;
  SolveReport pj = taar_solve(inst.A, inst.b, cfg, PrecondKind::PJ);
  SolveReport pgs = taar_solve(inst.A, inst.b, cfg, PrecondKind::PGS);
  SolveReport pf = taar_solve(inst.A, inst.b, cfg, PrecondKind::PF);
  SolveReport fullm = solve_fullm(inst.A, inst.b, cfg);
  REQUIRE(pj.converged);
  REQUIRE(pgs.converged);
  REQUIRE(pf.converged);
  REQUIRE(fullm.converged);
  const double scale = norm_inf(pf.solution);
  CHECK(norm_inf(sub(pj.solution, pf.solution)) <= 1e-6 * scale);
  CHECK(norm_inf(sub(pgs.solution, pf.solution)) <= 1e-6 * scale);
  CHECK(norm_inf(sub(fullm.solution, pf.solution)) <= 1e-6 * scale);
}

TEST_CASE("p larger than the iteration cap reduces TAAR to pure TR") {
  ProblemInstance inst = gen_random_mtensor(3, 8, 0.2, 77);
  SolverConfig cfg;
  cfg.x0 = inst.x0;
  cfg.record_iterates = true;
  SolverConfig big_p = cfg;
  big_p.p = cfg.max_iter + 2;
  SolverConfig pure = cfg;
  pure.method = Method::TR;
  SolveReport a = taar_solve(inst.A, inst.b, big_p, PrecondKind::PF);
  SolveReport b = taar_solve(inst.A, inst.b, pure, PrecondKind::PF);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  REQUIRE(a.iterates.size() == b.iterates.size());
  for (std::size_t k = 0; k < a.iterates.size(); ++k)
    CHECK(norm_inf(sub(a.iterates[k], b.iterates[k])) == 0.0);
  CHECK(a.tar_steps == 0);
}

TEST_CASE("telescoping identity holds componentwise") {
  Xoshiro256pp rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 2 + int(rng.next() % 5);
    const int n = 1 + int(rng.next() % 6);
    Vec y(std::size_t(n), 0.0), z(std::size_t(n), 0.0);
    for (double& v : y) v = 6.0 * rng.uniform01() - 3.0;
    for (double& v : z) v = 6.0 * rng.uniform01() - 3.0;
    const Vec lhs = sub(elementwise_pow(y, double(m - 1)), elementwise_pow(z, double(m - 1)));
    Vec acc(std::size_t(n), 0.0);
    for (int j = 0; j <= m - 2; ++j)
      acc = add(acc, hadamard(elementwise_pow(y, double(m - 2 - j)), elementwise_pow(z, double(j))));
    const Vec rhs = hadamard(sub(y, z), acc);
    for (int i = 0; i < n; ++i) {
      const double scale = std::max({1.0, std::pow(std::abs(y[std::size_t(i)]), double(m - 1)),
                                     std::pow(std::abs(z[std::size_t(i)]), double(m - 1))});
      CHECK(std::abs(lhs[std::size_t(i)] - rhs[std::size_t(i)]) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("order-2 TAAR-PJ matches the linear AAR iterate for iterate") {
  DenseTensor a = random_mmatrix_as_tensor(12, 54, 0.25);
  Xoshiro256pp rng(55);
  Vec b(12, 0.0);
  for (double& v : b) v = rng.uniform_open01();
  SolverConfig cfg;
  cfg.tol = 1e-10;
  cfg.p = 3;
  cfg.q = 2;
  cfg.record_iterates = true;
  SolveReport tensor_run = taar_solve(a, b, cfg, PrecondKind::PJ);
  SolveReport linear_run = aar_linear_solve(a.as_matrix(), b, cfg);
  REQUIRE(tensor_run.converged);
  REQUIRE(linear_run.converged);
  REQUIRE(tensor_run.iterations == linear_run.iterations);
  for (std::size_t k = 0; k < tensor_run.iterates.size(); ++k) {
    const double scale = std::max(1.0, norm_inf(linear_run.iterates[k]));
    CHECK(norm_inf(sub(tensor_run.iterates[k], linear_run.iterates[k])) <= 1e-10 * scale);
  }
}

TEST_CASE("linear AAR solves trivial systems in one iteration") {
  DenseMatrix id(4, 4);
  for (int i = 0; i < 4; ++i) id(i, i) = 1.0;
  SolverConfig cfg;
  SolveReport rep = aar_linear_solve(id, Vec{1.0, 2.0, 3.0, 4.0}, cfg);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);

  DenseMatrix d(10, 10);
  for (int i = 0; i < 10; ++i) d(i, i) = double(i + 1);
  SolveReport rep2 = aar_linear_solve(d, ones(10), cfg);
  CHECK(rep2.converged);
  CHECK(rep2.iterations == 1);

  DenseMatrix z(3, 3);
  CHECK_THROWS_AS(aar_linear_solve(z, ones(3), cfg), std::domain_error);
}

TEST_CASE("linear AAR beats plain Richardson on a diagonally dominant system") {
  const int n = 50;
  Xoshiro256pp rng(66);
  DenseMatrix a(n, n);
  for (double& v : a.data) v = rng.uniform01();
  for (int i = 0; i < n; ++i) {
    double rs = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) rs += a(i, j);
    a(i, i) = rs * 1.05 + 1.0;
  }
  Vec b(n, 0.0);
  for (double& v : b) v = rng.uniform_open01();

  SolverConfig cfg;
  cfg.max_iter = 200;
  SolveReport aar = aar_linear_solve(a, b, cfg);
  REQUIRE(aar.converged);
  CHECK(aar.iterations <= 200);

  // hand-rolled optimal-omega Richardson with the same Jacobi preconditioner
  Vec d = diagonal(a);
  Vec x(n, 0.1);
  const double denom = norm2(sub(b, matvec(a, x)));
  int plain_iters = 0;
  for (; plain_iters <= 2000; ++plain_iters) {
    Vec resid = sub(b, matvec(a, x));
    if (norm2(resid) / denom <= cfg.tol) break;
    Vec r = hadamard_div(resid, d);
    Vec ar = matvec(a, r);
    const double w = dot(resid, ar) / dot(ar, ar);
    axpy(w, r, x);
  }
  CHECK(aar.iterations < plain_iters);
}

TEST_CASE("taar_solve rejects problems outside its contract") {
  ProblemInstance p3 = appendix_problem3();  // not a Z-tensor
  SolverConfig cfg;
  cfg.x0 = p3.x0;
  CHECK_THROWS_AS(taar_solve(p3.A, p3.b, cfg, PrecondKind::PF), std::invalid_argument);

  SolverConfig bad;
  bad.q = 0;
  ProblemInstance inst = gen_random_mtensor(3, 4, 0.3, 3);
  CHECK_THROWS_AS(taar_solve(inst.A, inst.b, bad, PrecondKind::PF), std::invalid_argument);
  bad = SolverConfig{};
  bad.p = 1;
  CHECK_THROWS_AS(taar_solve(inst.A, inst.b, bad, PrecondKind::PF), std::invalid_argument);
}
