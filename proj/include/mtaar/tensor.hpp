// SPDX-License-Identifier: Apache-2.0
//
// Dense order-m tensors over R^n: k-mode products, structural parts
// (diagonal / lower-triangular / diagonal-face / lower-half), the
// majorization matrix, and M-tensor verification predicates.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mtaar {

using Vec = std::vector<double>;

// ---- small vector helpers -------------------------------------------------

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& v);
double norm_inf(const Vec& v);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scaled(const Vec& v, double s);
void axpy(double alpha, const Vec& x, Vec& y);  // y += alpha*x
Vec hadamard(const Vec& a, const Vec& b);
Vec hadamard_div(const Vec& a, const Vec& b);
Vec ones(int n);

/// Row-major dense matrix.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(int r, int c);

  double& operator()(int i, int j) { return data[std::size_t(i) * cols + j]; }
  double operator()(int i, int j) const { return data[std::size_t(i) * cols + j]; }
};

Vec matvec(const DenseMatrix& a, const Vec& x);
DenseMatrix tril(const DenseMatrix& a);
DenseMatrix diag_part(const DenseMatrix& a);
Vec diagonal(const DenseMatrix& a);

/// Order-m dimension-n tensor in lexicographic dense storage, first index
/// slowest. Order and dimension are fixed at construction. Indices are
/// 0-based in code; the notation in comments follows the usual 1-based
/// convention. Entries live in a flat array of length n^m.
///
/// Order 1 is admitted so that chained mode products close over the type;
/// as_vector()/as_matrix() convert the degenerate orders.
class DenseTensor {
 public:
  DenseTensor(int order, int dim);  // zero-filled
  DenseTensor(int order, int dim, std::vector<double> entries);

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::size_t size() const { return data_.size(); }

  double operator[](std::size_t flat) const { return data_[flat]; }
  double& operator[](std::size_t flat) { return data_[flat]; }

  double at(std::span<const int> idx) const { return data_[flat_index(idx)]; }
  double& at(std::span<const int> idx) { return data_[flat_index(idx)]; }
  std::size_t flat_index(std::span<const int> idx) const;

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  Vec as_vector() const;          // order-1 only
  DenseMatrix as_matrix() const;  // order-2 only

 private:
  int order_ = 1;
  int dim_ = 1;
  std::vector<double> data_;
};

/// Identity tensor: ones where i1 = i2 = ... = im, zero elsewhere.
DenseTensor identity_tensor(int order, int dim);

/// k-mode product A ×̄_k x, mode given 1-based in 2..m. Result has order m−1.
DenseTensor mode_product(const DenseTensor& a, int mode, const Vec& x);

/// A x^{m-1}: component i = Σ a_{i i2..im} x_{i2}···x_{im}.
Vec apply_xm1(const DenseTensor& a, const Vec& x);

/// A x^{m-2}: the n×n matrix (A ×̄_3 x ··· ×̄_m x); for order 2, A itself.
DenseMatrix apply_xm2(const DenseTensor& a, const Vec& x);

/// Majorization matrix M(A): (i,j) entry a_{i j j..j}.
DenseMatrix majorization_matrix(const DenseTensor& a);

enum class Part {
  Diagonal,         // keep i1 = i2 = ... = im
  LowerTriangular,  // keep i2, ..., im ≤ i1
  DiagonalFace,     // keep i1 = i2
  LowerHalf,        // keep i2 ≤ i1
};

DenseTensor extract_part(const DenseTensor& a, Part part);

/// True iff every off-diagonal entry is ≤ 0.
bool is_z_tensor(const DenseTensor& a);

/// Positive-probe test: Z-tensor and A·probe^{m-1} > 0 componentwise.
/// The probe must be strictly positive (throws otherwise).
bool verify_nonsingular_m_tensor(const DenseTensor& a, const Vec& probe);

/// Entry values invariant under index permutations, within tol (absolute).
bool is_symmetric(const DenseTensor& a, double tol = 1e-12);

/// Componentwise power. Integer p uses the plain power; non-integer p uses
/// the sign-preserving rule sign(v)·|v|^p so real roots of transiently
/// negative iterates stay real.
Vec elementwise_pow(const Vec& x, double p);

// ---- tensor text format ----------------------------------------------------
// Line 1: "m n"; then n^m whitespace-separated reals in lexicographic order.
// Values are written in shortest round-trip decimal form; read/write is
// bit-exact.

void save_tensor_text(const DenseTensor& a, std::ostream& os);
void save_tensor_text(const DenseTensor& a, const std::string& path);
DenseTensor load_tensor_text(std::istream& is);
DenseTensor load_tensor_text_file(const std::string& path);

/// Shortest decimal string that parses back to exactly v.
std::string format_double(double v);

}  // namespace mtaar
