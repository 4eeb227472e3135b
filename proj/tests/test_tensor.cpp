// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <array>
#include <cmath>
#include <cstring>
#include <sstream>

#include "mtaar/rng.hpp"
#include "mtaar/tensor.hpp"

using namespace mtaar;

namespace {

// The 3x3x3 worked example: slice k holds 9k+1..9k+9 row-major, so
// a_{ijk} = 9k + 3i + j + 1 (0-based indices).
DenseTensor worked_example() {
  DenseTensor a(3, 3);
  std::array<int, 3> idx{};
  for (idx[0] = 0; idx[0] < 3; ++idx[0])
    for (idx[1] = 0; idx[1] < 3; ++idx[1])
      for (idx[2] = 0; idx[2] < 3; ++idx[2])
        a.at(idx) = double(9 * idx[2] + 3 * idx[0] + idx[1] + 1);
  return a;
}

// Independent contraction oracle: sum a_{i i2..im} x_{i2}...x_{im} by brute
// force over all index tuples.
Vec brute_apply(const DenseTensor& a, const Vec& x) {
  const int m = a.order();
  const int n = a.dim();
  Vec out(std::size_t(n), 0.0);
  std::vector<int> idx(std::size_t(m), 0);
  std::size_t flat = 0;
  while (true) {
    double prod = a[flat];
    for (int k = 1; k < m; ++k) prod *= x[std::size_t(idx[std::size_t(k)])];
    out[std::size_t(idx[0])] += prod;
    int pos = m - 1;
    for (; pos >= 0; --pos) {
      if (++idx[std::size_t(pos)] < n) break;
      idx[std::size_t(pos)] = 0;
    }
    if (pos < 0) break;
    ++flat;
  }
  return out;
}

DenseTensor random_tensor(int m, int n, Xoshiro256pp& rng, double lo = 0.0, double hi = 1.0) {
  DenseTensor a(m, n);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = lo + (hi - lo) * rng.uniform01();
  return a;
}

}  // namespace

TEST_CASE("identity tensor shapes and entries") {
  DenseTensor t32 = identity_tensor(3, 2);
  int nonzeros = 0;
  for (std::size_t i = 0; i < t32.size(); ++i)
    if (t32[i] != 0.0) ++nonzeros;
  CHECK(nonzeros == 2);
  CHECK(t32.at(std::array<int, 3>{0, 0, 0}) == 1.0);
  CHECK(t32.at(std::array<int, 3>{1, 1, 1}) == 1.0);

  DenseTensor t23 = identity_tensor(2, 3);
  DenseMatrix m = t23.as_matrix();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(m(i, j) == (i == j ? 1.0 : 0.0));

  DenseTensor t43 = identity_tensor(4, 3);
  nonzeros = 0;
  for (std::size_t i = 0; i < t43.size(); ++i)
    if (t43[i] != 0.0) {
      ++nonzeros;
      CHECK(t43[i] == 1.0);
    }
  CHECK(nonzeros == 3);

  CHECK_THROWS_AS(identity_tensor(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(identity_tensor(3, 0), std::invalid_argument);
}

TEST_CASE("mode product examples") {
  DenseTensor id = identity_tensor(3, 2);
  Vec x{2.0, 3.0};
  DenseTensor once = mode_product(id, 2, x);
  DenseTensor twice = mode_product(once, 2, x);
  Vec v = twice.as_vector();
  CHECK(v[0] == doctest::Approx(4.0));
  CHECK(v[1] == doctest::Approx(9.0));

  DenseTensor a = worked_example();
  DenseTensor contracted = mode_product(a, 3, ones(3));
  DenseMatrix got = contracted.as_matrix();
  const double want[3][3] = {{30, 33, 36}, {39, 42, 45}, {48, 51, 54}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(got(i, j) == doctest::Approx(want[i][j]));
  // triple-loop oracle for the same contraction
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a.at(std::array<int, 3>{i, j, k});
      CHECK(got(i, j) == doctest::Approx(s));
    }

  Vec zero{0.0, 0.0};
  DenseTensor z = mode_product(id, 2, zero);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(z[i] == 0.0);

  CHECK_THROWS_AS(mode_product(id, 1, x), std::invalid_argument);
  CHECK_THROWS_AS(mode_product(id, 4, x), std::invalid_argument);
  CHECK_THROWS_AS(mode_product(id, 2, ones(3)), std::invalid_argument);
}

TEST_CASE("apply_xm1 matches the brute-force oracle and frozen values") {
  DenseTensor id = identity_tensor(3, 2);
  Vec r = apply_xm1(id, Vec{2.0, 3.0});
  CHECK(r[0] == doctest::Approx(4.0));
  CHECK(r[1] == doctest::Approx(9.0));

  DenseTensor a = worked_example();
  Vec s = apply_xm1(a, ones(3));
  CHECK(s[0] == doctest::Approx(99.0));
  CHECK(s[1] == doctest::Approx(126.0));
  CHECK(s[2] == doctest::Approx(153.0));
  Vec oracle = brute_apply(a, ones(3));
  for (int i = 0; i < 3; ++i) CHECK(s[std::size_t(i)] == doctest::Approx(oracle[std::size_t(i)]));

  Vec z = apply_xm1(a, Vec{0.0, 0.0, 0.0});
  for (double v : z) CHECK(v == 0.0);
}

TEST_CASE("apply_xm1 equals the fold of mode products over modes m..2") {
  Xoshiro256pp rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + int(rng.next() % 4);
    const int n = 2 + int(rng.next() % 5);
    DenseTensor a = random_tensor(m, n, rng, -1.0, 1.0);
    Vec x(std::size_t(n), 0.0);
    for (double& v : x) v = 2.0 * rng.uniform01() - 1.0;
    DenseTensor folded = a;
    for (int mode = m; mode >= 2; --mode) folded = mode_product(folded, mode, x);
    Vec via_fold = folded.as_vector();
    Vec direct = apply_xm1(a, x);
    for (int i = 0; i < n; ++i) {
      const double scale = std::max(1.0, std::abs(direct[std::size_t(i)]));
      CHECK(std::abs(via_fold[std::size_t(i)] - direct[std::size_t(i)]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("apply_xm2 examples and the xm2-times-x identity") {
  DenseTensor a = worked_example();
  DenseMatrix b = apply_xm2(a, ones(3));
  const double want[3][3] = {{30, 33, 36}, {39, 42, 45}, {48, 51, 54}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(b(i, j) == doctest::Approx(want[i][j]));

  DenseMatrix d = apply_xm2(identity_tensor(3, 2), Vec{2.0, 3.0});
  CHECK(d(0, 0) == doctest::Approx(2.0));
  CHECK(d(1, 1) == doctest::Approx(3.0));
  CHECK(d(0, 1) == 0.0);

  DenseTensor a4(4, 3);
  DenseMatrix z = apply_xm2(a4, Vec{0.0, 0.0, 0.0});
  for (double v : z.data) CHECK(v == 0.0);

  Xoshiro256pp rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + int(rng.next() % 4);
    const int n = 2 + int(rng.next() % 6);
    DenseTensor t = random_tensor(m, n, rng);
    Vec x(std::size_t(n), 0.0);
    for (double& v : x) v = 0.5 + rng.uniform01();
    Vec lhs = matvec(apply_xm2(t, x), x);
    Vec rhs = apply_xm1(t, x);
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(lhs[std::size_t(i)] - rhs[std::size_t(i)]) <=
            1e-12 * std::max(1.0, std::abs(rhs[std::size_t(i)])));
  }
}

TEST_CASE("majorization matrix") {
  DenseTensor a = worked_example();
  DenseMatrix m = majorization_matrix(a);
  const double want[3][3] = {{1, 11, 21}, {4, 14, 24}, {7, 17, 27}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(m(i, j) == want[i][j]);

  DenseMatrix mi = majorization_matrix(identity_tensor(4, 3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(mi(i, j) == (i == j ? 1.0 : 0.0));

  Xoshiro256pp rng(3);
  DenseTensor t2 = random_tensor(2, 4, rng);
  DenseMatrix m2 = majorization_matrix(t2);
  DenseMatrix self = t2.as_matrix();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(m2(i, j) == self(i, j));
}

TEST_CASE("part extraction") {
  DenseTensor a = worked_example();
  DenseTensor d = extract_part(a, Part::Diagonal);
  int nz = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] != 0.0) ++nz;
  CHECK(nz == 3);
  CHECK(d.at(std::array<int, 3>{0, 0, 0}) == 1.0);
  CHECK(d.at(std::array<int, 3>{1, 1, 1}) == 14.0);
  CHECK(d.at(std::array<int, 3>{2, 2, 2}) == 27.0);

  DenseTensor id = identity_tensor(3, 4);
  DenseTensor lh = extract_part(id, Part::LowerHalf);
  CHECK(std::memcmp(lh.data().data(), id.data().data(), id.size() * sizeof(double)) == 0);

  Xoshiro256pp rng(17);
  DenseTensor t2 = random_tensor(2, 4, rng);
  DenseTensor df = extract_part(t2, Part::DiagonalFace);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(df.at(std::array<int, 2>{i, j}) == (i == j ? t2.at(std::array<int, 2>{i, j}) : 0.0));
}

TEST_CASE("part extraction is idempotent with nested supports") {
  Xoshiro256pp rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 2 + int(rng.next() % 3);
    const int n = 2 + int(rng.next() % 4);
    DenseTensor a = random_tensor(m, n, rng, -1.0, 1.0);
    for (Part p : {Part::Diagonal, Part::LowerTriangular, Part::DiagonalFace, Part::LowerHalf}) {
      DenseTensor once = extract_part(a, p);
      DenseTensor twice = extract_part(once, p);
      CHECK(std::memcmp(once.data().data(), twice.data().data(), once.size() * sizeof(double)) == 0);
    }
    DenseTensor d = extract_part(a, Part::Diagonal);
    DenseTensor l = extract_part(a, Part::LowerTriangular);
    DenseTensor lh = extract_part(a, Part::LowerHalf);
    DenseTensor df = extract_part(a, Part::DiagonalFace);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (d[i] != 0.0) {
        CHECK(l[i] == d[i]);
        CHECK(df[i] == d[i]);
      }
      if (l[i] != 0.0) CHECK(lh[i] == l[i]);
    }
    DenseMatrix lm = majorization_matrix(l);
    DenseMatrix tm = tril(majorization_matrix(a));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(lm(i, j) == tm(i, j));
  }
}

TEST_CASE("Z-tensor and M-tensor predicates") {
  CHECK(is_z_tensor(identity_tensor(3, 4)));
  CHECK_FALSE(is_z_tensor(worked_example()));

  CHECK(verify_nonsingular_m_tensor(identity_tensor(3, 4), ones(4)));

  DenseTensor neg = identity_tensor(3, 2);
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -neg[i];
  CHECK_FALSE(verify_nonsingular_m_tensor(neg, ones(2)));

  Vec bad{1.0, 0.0};
  CHECK_THROWS_AS(verify_nonsingular_m_tensor(identity_tensor(3, 2), bad), std::invalid_argument);
}

TEST_CASE("elementwise_pow examples and round trips") {
  Vec a = elementwise_pow(Vec{4.0, 9.0}, 0.5);
  CHECK(a[0] == doctest::Approx(2.0));
  CHECK(a[1] == doctest::Approx(3.0));

  Vec b = elementwise_pow(Vec{2.0, 3.0}, 2.0);
  CHECK(b[0] == 4.0);
  CHECK(b[1] == 9.0);

  Vec c = elementwise_pow(Vec{-8.0}, 1.0 / 3.0);
  CHECK(c[0] == doctest::Approx(-2.0));
  CHECK(elementwise_pow(c, 3.0)[0] == doctest::Approx(-8.0));  // cube it back

  // sign-preserving round trip: all reals for odd powers, nonnegatives for even
  Xoshiro256pp rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + int(rng.next() % 5);
    const double v = 4.0 * rng.uniform01() - 2.0;
    const double x = (m - 1) % 2 == 1 ? v : std::abs(v);
    const Vec rt = elementwise_pow(elementwise_pow(Vec{x}, double(m - 1)), 1.0 / (m - 1));
    CHECK(rt[0] == doctest::Approx(x).epsilon(1e-12));
  }

  // integer-valued inputs agree with the tensor route with no rounding at all
  DenseTensor id = identity_tensor(4, 3);
  Vec xi{2.0, 3.0, 5.0};
  Vec via_tensor = apply_xm1(id, xi);
  Vec via_pow = elementwise_pow(xi, 3.0);
  for (int i = 0; i < 3; ++i) CHECK(via_tensor[std::size_t(i)] == via_pow[std::size_t(i)]);

  // x^[0] is all ones even for negative components
  Vec zs = elementwise_pow(Vec{-2.0, 0.5, 3.0}, 0.0);
  for (double v : zs) CHECK(v == 1.0);
}

TEST_CASE("tensor text format round-trips bit-exactly") {
  Xoshiro256pp rng(31);
  DenseTensor a(3, 4);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = 2.0 * rng.uniform01() - 1.0;
  a[0] = 0.1;
  a[1] = -1e-300;
  a[2] = 12345678.9012345;
  a[3] = 0.0;

  std::stringstream ss;
  save_tensor_text(a, ss);
  DenseTensor back = load_tensor_text(ss);
  REQUIRE(back.order() == a.order());
  REQUIRE(back.dim() == a.dim());
  CHECK(std::memcmp(back.data().data(), a.data().data(), a.size() * sizeof(double)) == 0);

  std::stringstream bad("3 2\n1.0 garbage");
  CHECK_THROWS(load_tensor_text(bad));
}
