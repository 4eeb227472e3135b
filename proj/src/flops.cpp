// SPDX-License-Identifier: Apache-2.0

#include "mtaar/flops.hpp"

#include <stdexcept>

namespace mtaar {

long long ipow_ll(int base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

long long apply_xm1_flops(int m, int n) { return m * ipow_ll(n, m) - n; }

long long apply_xm2_flops(int m, int n) { return (m - 1) * ipow_ll(n, m) - (long long)n * n; }

long long dense_solve_flops(int n) { return (long long)n * n * n; }

long long precond_solve_flops(PrecondKind kind, int n) {
  switch (kind) {
    case PrecondKind::PJ: return n;
    case PrecondKind::PGS: return (long long)n * n;
    case PrecondKind::PF: return (long long)n * n * n;
  }
  return 0;
}

long long flops_per_iteration(Method method, int m, int n, PrecondKind kind) {
  switch (method) {
    case Method::J1:
    case Method::GS1:
    case Method::J1SORlike:
    case Method::GS1SORlike:
    case Method::J3:
    case Method::GS3:
      return 2 * apply_xm1_flops(m, n);
    case Method::FULLM:
      return 2 * apply_xm1_flops(m, n) + dense_solve_flops(n);
    case Method::J2:
    case Method::GS2:
      return apply_xm1_flops(m, n) + apply_xm2_flops(m, n);
    case Method::TR:
    case Method::TAR:
    case Method::TAAR:
      return apply_xm2_flops(m, n) + precond_solve_flops(kind, n);
    case Method::Newton:
      return apply_xm2_flops(m, n) + dense_solve_flops(n);
    case Method::AARLinear:
      return 2LL * n * n + n;
  }
  throw std::invalid_argument("unknown-method");
}

}  // namespace mtaar
