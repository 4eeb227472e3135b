// SPDX-License-Identifier: Apache-2.0
//
// Internal helpers shared by the iteration drivers.

#pragma once

#include <chrono>
#include <stdexcept>

#include "mtaar/solver.hpp"

namespace mtaar::detail {

// Stopping measure per the paper: relative mode normalizes by the residual
// at x0 (captured on the first call); an exactly solved x0 reports 0.
struct StopTracker {
  StoppingMode mode;
  double tol;
  double denom = -1.0;

  double measure(double rnorm) {
    if (mode == StoppingMode::Absolute) return rnorm;
    if (denom < 0.0) denom = rnorm;
    return denom == 0.0 ? 0.0 : rnorm / denom;
  }
  bool satisfied(double m) const { return m <= tol; }
};

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

inline Vec default_x0(const SolverConfig& cfg, int n) {
  if (!cfg.x0) return Vec(std::size_t(n), 0.1);
  if (int(cfg.x0->size()) != n) throw std::invalid_argument("invalid-problem: x0 length mismatch");
  return *cfg.x0;
}

inline void require_positive(const Vec& v, const char* what) {
  for (double x : v)
    if (!(x > 0.0)) throw std::invalid_argument(std::string("invalid-problem: ") + what + " must be strictly positive");
}

inline void require_mtensor(const DenseTensor& a) {
  if (!verify_nonsingular_m_tensor(a, ones(a.dim())))
    throw std::invalid_argument("invalid-problem: tensor fails the nonsingular M-tensor probe test");
}

inline bool any_nonpositive(const Vec& v) {
  for (double x : v)
    if (!(x > 0.0)) return true;
  return false;
}

}  // namespace mtaar::detail
