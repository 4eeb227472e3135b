// SPDX-License-Identifier: Apache-2.0
//
// Shared solver configuration and reporting types.

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mtaar/tensor.hpp"

namespace mtaar {

enum class Method {
  J1, GS1, J1SORlike, GS1SORlike, Newton,
  J2, GS2,
  J3, GS3, FULLM,
  TR, TAR, TAAR,
  AARLinear,
};

enum class StoppingMode { Relative, Absolute };

enum class PrecondKind { PJ, PGS, PF };

std::string method_id(Method m);
std::optional<Method> method_from_id(std::string_view id);
std::string precond_id(PrecondKind k);
std::optional<PrecondKind> precond_from_id(std::string_view id);

struct SolverConfig {
  Method method = Method::TAAR;
  double tol = 1e-8;
  int max_iter = 20000;
  std::optional<Vec> x0;          // default: 0.1 in every component
  std::optional<double> omega;    // SOR parameter; default 0.35·min diag
  int p = 10;                     // one TAR step after every p−1 TR steps
  int q = 6;                      // Anderson window depth
  StoppingMode stopping_mode = StoppingMode::Relative;
  bool record_iterates = false;   // keep every x_k in the report (tests)
};

/// Validates the config invariants (tol > 0, max_iter ≥ 1, p ≥ 2, q ≥ 1).
void validate_config(const SolverConfig& cfg);

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  // residual_history[k] is the stopping measure at iterate k (relative ratio
  // or absolute 2-norm per stopping_mode); length = iterations + 1.
  std::vector<double> residual_history;
  // cumulative_flops[k] is the Table-1 model cost of the first k updates;
  // length = iterations + 1, starts at 0, nondecreasing.
  std::vector<long long> cumulative_flops;
  // wall clock (ms) when iterate k was reached; same length as
  // residual_history. Excluded from byte-stability guarantees.
  std::vector<double> wall_ms;
  double wall_time_s = 0.0;
  Vec solution;
  // Set when an iterate acquires a nonpositive component (also used by the
  // Newton method when an iterate leaves Ω = {x>0 : A x^{m-1} > 0}).
  bool nonpositive_iterate_flag = false;
  // Set when a TR/TAR direction degenerated (denominator underflow).
  bool degenerate_step_flag = false;
  int tr_steps = 0;  // TAAR bookkeeping
  int tar_steps = 0;
  std::vector<Vec> iterates;  // filled only when cfg.record_iterates
};

}  // namespace mtaar
