// SPDX-License-Identifier: Apache-2.0
//
// mtaar command line: single solves, experiment suites, acceptance run.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mtaar/bench.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Multilinear M-tensor solver benchmark harness (TAAR and tensor splitting methods)"};
  app.require_subcommand(1);

  mtaar::SolveRequest req;
  std::string seed_str;  // parsed manually so the env default stays visible
  auto* solve = app.add_subcommand("solve", "run one method on one problem and write a report");
  solve->add_option("--problem", req.problem, "random|sine|gravity|appendix3|appendix61")
      ->default_val("random");
  solve->add_option("--m", req.m, "tensor order (random problems)")->default_val(3);
  solve->add_option("--n", req.n, "dimension")->default_val(10);
  solve->add_option("--epsilon", req.epsilon, "random M-tensor shift margin")->default_val(0.01);
  solve->add_option("--seed", seed_str, "RNG seed (default: MTAAR_SEED or builtin)");
  solve->add_option("--method", req.method,
                    "j1|gs1|j1sor|gs1sor|newton|j2|gs2|j3|gs3|fullm|tr|taar|aar-linear")
      ->default_val("taar");
  solve->add_option("--precond", req.precond, "pj|pgs|pf (TR/TAAR only)")->default_val("pf");
  double tol = -1.0;
  solve->add_option("--tol", tol, "stopping tolerance (default: problem's)");
  solve->add_option("--max-iter", req.max_iter, "iteration cap")->default_val(20000);
  solve->add_option("--p", req.p, "TAR period")->default_val(10);
  solve->add_option("--q", req.q, "Anderson window depth")->default_val(6);
  std::string x0_mode = "default";
  solve->add_option("--x0", x0_mode, "default|scaled (scaled: gravity boundary value)");
  solve->add_option("--out", req.out, "JSON report path (trace CSV written next to it)")
      ->default_val("mtaar_report.json");

  std::string suite_name;
  bool full = false;
  bool include_gs1 = false;
  int jobs = 1;
  std::string out_dir = "bench_out";
  std::string bands_path = "data/suite_bands.json";
  auto* bench = app.add_subcommand("bench", "run an experiment suite with band checks");
  bench->add_option("--suite", suite_name, "table2|table3|table4|table5|table6|fig1|gravity")
      ->required();
  bench->add_flag("--full", full, "run the full-size experiment grid instead of the desk grid");
  bench->add_flag("--include-gs1", include_gs1, "add GS1/GS1_SORlike to table3 (slow)");
  bench->add_option("--jobs", jobs, "parallel (instance, method) cells")->default_val(1);
  bench->add_option("--out", out_dir, "output directory")->default_val("bench_out");
  bench->add_option("--bands", bands_path, "suite bands data file")->default_val("data/suite_bands.json");

  std::string verify_suite = "acceptance";
  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_option("--suite", verify_suite, "acceptance")->default_val("acceptance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      if (!seed_str.empty()) req.seed = std::stoull(seed_str);
      if (tol > 0.0) req.tol = tol;
      req.scaled_x0 = x0_mode == "scaled";
      return mtaar::run_solve(req, std::cout);
    }
    if (bench->parsed())
      return mtaar::run_suite(suite_name, full, jobs, out_dir, bands_path, include_gs1, std::cout);
    if (verify->parsed()) {
      if (verify_suite != "acceptance") {
        std::cout << "error: invalid-flags: unknown verify suite '" << verify_suite << "'\n";
        return 1;
      }
      return mtaar::run_acceptance(std::cout);
    }
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
