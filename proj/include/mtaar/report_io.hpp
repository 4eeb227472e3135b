// SPDX-License-Identifier: Apache-2.0
//
// Machine-readable outputs: JSON solve report (schema "mtaar-report-v1",
// documented in the README) and the per-iteration CSV residual trace with
// columns iter,residual,cumulative_flops,wall_ms. Everything except the
// wall_ms column is byte-stable for fixed seeds.

#pragma once

#include <cstdint>
#include <string>

#include "mtaar/solver.hpp"

namespace mtaar {

struct RunInfo {
  std::string problem;
  std::string method;
  std::string precond;  // empty when the method takes no preconditioner
  int m = 0;
  int n = 0;
  double tol = 0.0;
  StoppingMode stopping_mode = StoppingMode::Relative;
  int p = 0;
  int q = 0;
  std::uint64_t seed = 0;
  bool seeded = false;
};

void write_report_json(const std::string& path, const RunInfo& info, const SolveReport& rep);
void write_trace_csv(const std::string& path, const SolveReport& rep);

}  // namespace mtaar
