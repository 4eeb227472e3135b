// SPDX-License-Identifier: Apache-2.0
//
// Benchmark harness: single solves, experiment suites with band checks
// against data/suite_bands.json, and the acceptance run. Shared by the CLI
// and the test binaries.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "mtaar/problems.hpp"
#include "mtaar/solver.hpp"

namespace mtaar {

/// Default instance seed; the MTAAR_SEED environment variable overrides it,
/// an explicit --seed flag overrides both.
std::uint64_t default_seed();
constexpr std::uint64_t kBuiltinSeed = 200;

struct SolveRequest {
  std::string problem = "random";  // random|sine|gravity|appendix3|appendix61
  int m = 3;
  int n = 10;
  double epsilon = 0.01;
  std::optional<std::uint64_t> seed;  // default_seed() when absent
  std::string method = "taar";
  std::string precond = "pf";
  std::optional<double> tol;      // instance default when absent
  int max_iter = 20000;
  int p = 10;
  int q = 6;
  bool scaled_x0 = false;         // gravity: x0 = c0·e instead of 0.1·e
  std::string out = "mtaar_report.json";  // trace CSV lands next to it
};

/// Builds the problem a request names. aar-linear runs on the order-2
/// random M-matrix built by the same sI − B recipe.
ProblemInstance make_problem(const SolveRequest& req);

/// Runs one method on an instance. TR/TAR/TAAR use `kind`; the rest ignore it.
SolveReport dispatch_method(const ProblemInstance& inst, Method method, PrecondKind kind,
                            const SolverConfig& cfg);

/// Recomputes the stopping criterion from scratch on the returned solution.
bool certify_report(const ProblemInstance& inst, const SolverConfig& cfg, const SolveReport& rep);

/// CLI `solve`: returns 0 on convergence, 2 when not converged, 1 on
/// invalid input. Writes the JSON report and CSV trace.
int run_solve(const SolveRequest& req, std::ostream& log);

/// CLI `bench`: runs a named suite (table2|table3|table4|table5|table6|
/// fig1|gravity), writes <out_dir>/<suite>.csv plus per-method traces where
/// the suite defines them. Returns 0, or 3 when any band is violated, or 1
/// on invalid input. GS1/GS1_SORlike join table3 only with include_gs1.
int run_suite(const std::string& name, bool full, int jobs, const std::string& out_dir,
              const std::string& bands_path, bool include_gs1, std::ostream& log);

/// The acceptance gate: prints one PASS/FAIL line per criterion, returns 0
/// iff all pass. Thresholds are pinned in code; `bands_path` only locates
/// the auditable copy used by the bench suites.
int run_acceptance(std::ostream& log);

}  // namespace mtaar
