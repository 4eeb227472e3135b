// SPDX-License-Identifier: Apache-2.0

#include "mtaar/tensor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mtaar {

namespace {

std::size_t checked_pow(int n, int m) {
  std::size_t r = 1;
  for (int i = 0; i < m; ++i) {
    if (n != 0 && r > std::size_t(1) << 56) throw std::invalid_argument("invalid-dimension: n^m overflows");
    r *= std::size_t(n);
  }
  return r;
}

// Odometer over m digits in [0, n). Returns false when exhausted.
bool advance(std::vector<int>& idx, int n) {
  for (int pos = int(idx.size()) - 1; pos >= 0; --pos) {
    if (++idx[pos] < n) return true;
    idx[pos] = 0;
  }
  return false;
}

}  // namespace

// ---- vector helpers --------------------------------------------------------

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

double norm_inf(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec scaled(const Vec& v, double s) {
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] * s;
  return r;
}

void axpy(double alpha, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vec hadamard(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * b[i];
  return r;
}

Vec hadamard_div(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] / b[i];
  return r;
}

Vec ones(int n) { return Vec(std::size_t(n), 1.0); }

// ---- DenseMatrix -----------------------------------------------------------

DenseMatrix::DenseMatrix(int r, int c) : rows(r), cols(c), data(std::size_t(r) * std::size_t(c), 0.0) {
  if (r < 0 || c < 0) throw std::invalid_argument("invalid-dimension: negative matrix size");
}

Vec matvec(const DenseMatrix& a, const Vec& x) {
  if (int(x.size()) != a.cols) throw std::invalid_argument("dimension-mismatch: matvec");
  Vec y(std::size_t(a.rows), 0.0);
  for (int i = 0; i < a.rows; ++i) {
    const double* row = a.data.data() + std::size_t(i) * a.cols;
    double s = 0.0;
    for (int j = 0; j < a.cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

DenseMatrix tril(const DenseMatrix& a) {
  DenseMatrix r(a.rows, a.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j <= std::min(i, a.cols - 1); ++j) r(i, j) = a(i, j);
  return r;
}

DenseMatrix diag_part(const DenseMatrix& a) {
  DenseMatrix r(a.rows, a.cols);
  for (int i = 0; i < std::min(a.rows, a.cols); ++i) r(i, i) = a(i, i);
  return r;
}

Vec diagonal(const DenseMatrix& a) {
  int n = std::min(a.rows, a.cols);
  Vec d(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i) d[i] = a(i, i);
  return d;
}

// ---- DenseTensor -----------------------------------------------------------

DenseTensor::DenseTensor(int order, int dim) : order_(order), dim_(dim) {
  if (order < 1) throw std::invalid_argument("invalid-dimension: tensor order must be >= 1");
  if (dim < 1) throw std::invalid_argument("invalid-dimension: tensor dim must be >= 1");
  data_.assign(checked_pow(dim, order), 0.0);
}

DenseTensor::DenseTensor(int order, int dim, std::vector<double> entries) : order_(order), dim_(dim) {
  if (order < 1) throw std::invalid_argument("invalid-dimension: tensor order must be >= 1");
  if (dim < 1) throw std::invalid_argument("invalid-dimension: tensor dim must be >= 1");
  if (entries.size() != checked_pow(dim, order))
    throw std::invalid_argument("invalid-dimension: entry count != n^m");
  data_ = std::move(entries);
}

std::size_t DenseTensor::flat_index(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (int v : idx) flat = flat * std::size_t(dim_) + std::size_t(v);
  return flat;
}

Vec DenseTensor::as_vector() const {
  if (order_ != 1) throw std::invalid_argument("dimension-mismatch: as_vector needs order 1");
  return data_;
}

DenseMatrix DenseTensor::as_matrix() const {
  if (order_ != 2) throw std::invalid_argument("dimension-mismatch: as_matrix needs order 2");
  DenseMatrix m(dim_, dim_);
  m.data = data_;
  return m;
}

DenseTensor identity_tensor(int order, int dim) {
  if (order < 2) throw std::invalid_argument("invalid-dimension: identity tensor needs order >= 2");
  if (dim < 1) throw std::invalid_argument("invalid-dimension: identity tensor needs dim >= 1");
  DenseTensor t(order, dim);
  // flat index of (i, i, ..., i) is i * (n^{m-1} + ... + n + 1)
  std::size_t stride = 0;
  std::size_t p = 1;
  for (int k = 0; k < order; ++k) {
    stride += p;
    p *= std::size_t(dim);
  }
  for (int i = 0; i < dim; ++i) t[std::size_t(i) * stride] = 1.0;
  return t;
}

DenseTensor mode_product(const DenseTensor& a, int mode, const Vec& x) {
  const int m = a.order();
  const int n = a.dim();
  if (int(x.size()) != n) throw std::invalid_argument("dimension-mismatch: mode_product vector length");
  if (mode < 2 || mode > m) throw std::invalid_argument("mode-out-of-range: mode must be in 2..m");
  // strides: contracted index varies with stride n^{m-mode}
  std::size_t suffix = 1;
  for (int k = 0; k < m - mode; ++k) suffix *= std::size_t(n);
  std::size_t prefix = a.size() / (suffix * std::size_t(n));
  DenseTensor out(m - 1, n);
  const double* src = a.data().data();
  double* dst = out.data().data();
  for (std::size_t p = 0; p < prefix; ++p) {
    for (std::size_t s = 0; s < suffix; ++s) {
      double acc = 0.0;
      std::size_t base = p * suffix * std::size_t(n) + s;
      for (int t = 0; t < n; ++t) acc += src[base + std::size_t(t) * suffix] * x[std::size_t(t)];
      dst[p * suffix + s] = acc;
    }
  }
  return out;
}

namespace {

// Contract the trailing index of a length-(sz) buffer viewed as (sz/n, n),
// in place; returns the reduced size. Safe forward: reads stay ahead of writes.
std::size_t contract_last(std::vector<double>& buf, std::size_t sz, const Vec& x) {
  const std::size_t n = x.size();
  const std::size_t out = sz / n;
  for (std::size_t a = 0; a < out; ++a) {
    const double* row = buf.data() + a * n;
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) s += row[t] * x[t];
    buf[a] = s;
  }
  return out;
}

}  // namespace

Vec apply_xm1(const DenseTensor& a, const Vec& x) {
  const int n = a.dim();
  if (int(x.size()) != n) throw std::invalid_argument("dimension-mismatch: apply_xm1 vector length");
  // First contraction reads the tensor directly; the rest shrink a small buffer.
  std::size_t out_sz = a.size() / std::size_t(n);
  std::vector<double> buf(out_sz);
  const double* src = a.data().data();
  for (std::size_t i = 0; i < out_sz; ++i) {
    const double* row = src + i * std::size_t(n);
    double s = 0.0;
    for (int t = 0; t < n; ++t) s += row[t] * x[std::size_t(t)];
    buf[i] = s;
  }
  std::size_t sz = out_sz;
  while (sz > std::size_t(n)) sz = contract_last(buf, sz, x);
  buf.resize(sz);
  return buf;
}

DenseMatrix apply_xm2(const DenseTensor& a, const Vec& x) {
  const int n = a.dim();
  if (int(x.size()) != n) throw std::invalid_argument("dimension-mismatch: apply_xm2 vector length");
  if (a.order() == 2) return a.as_matrix();
  std::size_t out_sz = a.size() / std::size_t(n);
  std::vector<double> buf(out_sz);
  const double* src = a.data().data();
  for (std::size_t i = 0; i < out_sz; ++i) {
    const double* row = src + i * std::size_t(n);
    double s = 0.0;
    for (int t = 0; t < n; ++t) s += row[t] * x[std::size_t(t)];
    buf[i] = s;
  }
  std::size_t sz = out_sz;
  const std::size_t target = std::size_t(n) * std::size_t(n);
  while (sz > target) sz = contract_last(buf, sz, x);
  buf.resize(sz);
  DenseMatrix m(n, n);
  m.data = std::move(buf);
  return m;
}

DenseMatrix majorization_matrix(const DenseTensor& a) {
  const int n = a.dim();
  const int m = a.order();
  DenseMatrix out(n, n);
  std::vector<int> idx(std::size_t(m), 0);
  for (int i = 0; i < n; ++i) {
    idx[0] = i;
    for (int j = 0; j < n; ++j) {
      for (int k = 1; k < m; ++k) idx[std::size_t(k)] = j;
      out(i, j) = a.at(idx);
    }
  }
  return out;
}

DenseTensor extract_part(const DenseTensor& a, Part part) {
  const int m = a.order();
  const int n = a.dim();
  DenseTensor out(m, n);
  std::vector<int> idx(std::size_t(m), 0);
  std::size_t flat = 0;
  do {
    bool keep = false;
    switch (part) {
      case Part::Diagonal: {
        keep = true;
        for (int k = 1; k < m; ++k)
          if (idx[std::size_t(k)] != idx[0]) { keep = false; break; }
        break;
      }
      case Part::LowerTriangular: {
        keep = true;
        for (int k = 1; k < m; ++k)
          if (idx[std::size_t(k)] > idx[0]) { keep = false; break; }
        break;
      }
      case Part::DiagonalFace:
        keep = m < 2 || idx[1] == idx[0];
        break;
      case Part::LowerHalf:
        keep = m < 2 || idx[1] <= idx[0];
        break;
    }
    if (keep) out[flat] = a[flat];
    ++flat;
  } while (advance(idx, n));
  return out;
}

bool is_z_tensor(const DenseTensor& a) {
  const int m = a.order();
  const int n = a.dim();
  std::vector<int> idx(std::size_t(m), 0);
  std::size_t flat = 0;
  do {
    bool diag = true;
    for (int k = 1; k < m; ++k)
      if (idx[std::size_t(k)] != idx[0]) { diag = false; break; }
    if (!diag && a[flat] > 0.0) return false;
    ++flat;
  } while (advance(idx, n));
  return true;
}

bool verify_nonsingular_m_tensor(const DenseTensor& a, const Vec& probe) {
  if (int(probe.size()) != a.dim()) throw std::invalid_argument("dimension-mismatch: probe length");
  for (double v : probe)
    if (!(v > 0.0)) throw std::invalid_argument("nonpositive-probe: probe must be strictly positive");
  if (!is_z_tensor(a)) return false;
  Vec ax = apply_xm1(a, probe);
  for (double v : ax)
    if (!(v > 0.0)) return false;
  return true;
}

bool is_symmetric(const DenseTensor& a, double tol) {
  const int m = a.order();
  const int n = a.dim();
  std::vector<int> idx(std::size_t(m), 0);
  std::vector<int> canon(std::size_t(m), 0);
  std::size_t flat = 0;
  do {
    canon.assign(idx.begin(), idx.end());
    std::sort(canon.begin(), canon.end());
    if (std::abs(a[flat] - a.at(canon)) > tol) return false;
    ++flat;
  } while (advance(idx, n));
  return true;
}

Vec elementwise_pow(const Vec& x, double p) {
  const bool integer_p = p == std::floor(p) && std::abs(p) < 1e15;
  Vec r(x.size());
  if (integer_p) {
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::pow(x[i], p);
  } else {
    for (std::size_t i = 0; i < x.size(); ++i)
      r[i] = x[i] < 0.0 ? -std::pow(-x[i], p) : std::pow(x[i], p);
  }
  return r;
}

// ---- text format -----------------------------------------------------------

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void save_tensor_text(const DenseTensor& a, std::ostream& os) {
  os << a.order() << ' ' << a.dim() << '\n';
  const std::size_t per_line = 8;
  for (std::size_t i = 0; i < a.size(); ++i) {
    os << format_double(a[i]);
    os << ((i + 1) % per_line == 0 || i + 1 == a.size() ? '\n' : ' ');
  }
}

void save_tensor_text(const DenseTensor& a, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("file-io: cannot open " + path + " for writing");
  save_tensor_text(a, os);
}

DenseTensor load_tensor_text(std::istream& is) {
  int m = 0, n = 0;
  if (!(is >> m >> n)) throw std::runtime_error("file-io: bad tensor header");
  DenseTensor t(m, n);
  std::string tok;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(is >> tok)) throw std::runtime_error("file-io: truncated tensor data");
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
      throw std::runtime_error("file-io: bad tensor value '" + tok + "'");
    t[i] = v;
  }
  return t;
}

DenseTensor load_tensor_text_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("file-io: cannot open " + path);
  return load_tensor_text(is);
}

}  // namespace mtaar
