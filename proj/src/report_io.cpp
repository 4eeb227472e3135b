// SPDX-License-Identifier: Apache-2.0

#include "mtaar/report_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mtaar {

void write_report_json(const std::string& path, const RunInfo& info, const SolveReport& rep) {
  nlohmann::json j;
  j["schema"] = "mtaar-report-v1";
  j["problem"] = info.problem;
  j["method"] = info.method;
  if (!info.precond.empty()) j["precond"] = info.precond;
  j["m"] = info.m;
  j["n"] = info.n;
  j["tol"] = info.tol;
  j["stopping"] = info.stopping_mode == StoppingMode::Relative ? "relative" : "absolute";
  if (info.p > 0) j["p"] = info.p;
  if (info.q > 0) j["q"] = info.q;
  if (info.seeded) j["seed"] = info.seed;
  j["converged"] = rep.converged;
  j["iterations"] = rep.iterations;
  j["final_residual"] = rep.residual_history.empty() ? 0.0 : rep.residual_history.back();
  j["total_flops"] = rep.cumulative_flops.empty() ? 0 : rep.cumulative_flops.back();
  j["wall_time_s"] = rep.wall_time_s;
  j["nonpositive_iterate"] = rep.nonpositive_iterate_flag;
  j["degenerate_step"] = rep.degenerate_step_flag;
  if (rep.tr_steps + rep.tar_steps > 0) {
    j["tr_steps"] = rep.tr_steps;
    j["tar_steps"] = rep.tar_steps;
  }
  j["solution"] = rep.solution;
  j["residual_history"] = rep.residual_history;
  j["cumulative_flops"] = rep.cumulative_flops;

  std::ofstream os(path);
  if (!os) throw std::runtime_error("file-io: cannot open " + path + " for writing");
  os << j.dump(2) << '\n';
}

void write_trace_csv(const std::string& path, const SolveReport& rep) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("file-io: cannot open " + path + " for writing");
  os << "iter,residual,cumulative_flops,wall_ms\n";
  for (std::size_t k = 0; k < rep.residual_history.size(); ++k) {
    const long long flops = k < rep.cumulative_flops.size() ? rep.cumulative_flops[k] : 0;
    const double wall = k < rep.wall_ms.size() ? rep.wall_ms[k] : 0.0;
    os << k << ',' << format_double(rep.residual_history[k]) << ',' << flops << ','
       << format_double(wall) << '\n';
  }
}

}  // namespace mtaar
