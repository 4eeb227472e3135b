// SPDX-License-Identifier: Apache-2.0

#include "mtaar/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "mtaar/flops.hpp"
#include "mtaar/linalg.hpp"
#include "mtaar/report_io.hpp"
#include "mtaar/rng.hpp"
#include "mtaar/splitting.hpp"
#include "mtaar/taar.hpp"
#include "solve_util.hpp"

namespace mtaar {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MTAAR_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid-flags: MTAAR_SEED is not an integer");
    }
  }
  return kBuiltinSeed;
}

namespace {

// Order-2 variant of the random construction, for the linear AAR baseline.
ProblemInstance gen_random_mmatrix(int n, double epsilon, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  DenseTensor a(2, n);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = rng.uniform_open01();
  const Vec row_sums = apply_xm1(a, ones(n));
  const double s = (1.0 + epsilon) * *std::max_element(row_sums.begin(), row_sums.end());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = -a[i];
  for (int i = 0; i < n; ++i) a[std::size_t(i) * std::size_t(n + 1)] += s;
  Vec b(std::size_t(n), 0.0);
  for (double& v : b) v = rng.uniform_open01();
  std::ostringstream label;
  label << "random-m2-n" << n << "-eps" << format_double(epsilon) << "-seed" << seed;
  return ProblemInstance{label.str(), std::move(a), std::move(b), Vec(std::size_t(n), 0.1),
                         ones(n), StoppingMode::Relative, 1e-8, {}};
}

}  // namespace

ProblemInstance make_problem(const SolveRequest& req) {
  const std::uint64_t seed = req.seed.value_or(default_seed());
  ProblemInstance inst = [&] {
    if (req.problem == "random") {
      if (req.method == "aar-linear" || req.m == 2) return gen_random_mmatrix(req.n, req.epsilon, seed);
      return gen_random_mtensor(req.m, req.n, req.epsilon, seed);
    }
    if (req.problem == "sine") return gen_sine_symmetric(req.n);
    if (req.problem == "gravity") return gen_gravity_bvp(req.n == 0 ? 20 : req.n);
    if (req.problem == "appendix3") return appendix_problem3();
    if (req.problem == "appendix61") return appendix_example61(seed);
    throw std::invalid_argument("invalid-flags: unknown problem '" + req.problem + "'");
  }();
  if (req.scaled_x0) {
    const auto it = inst.known_meta.find("c0");
    const double scale = it != inst.known_meta.end() ? it->second : 1.0;
    inst.x0.assign(inst.x0.size(), scale);
  }
  return inst;
}

SolveReport dispatch_method(const ProblemInstance& inst, Method method, PrecondKind kind,
                            const SolverConfig& cfg) {
  SolverConfig c = cfg;
  c.method = method;
  if (!c.x0) c.x0 = inst.x0;
  switch (method) {
    case Method::J1: return solve_j1(inst.A, inst.b, c);
    case Method::GS1: return solve_gs1(inst.A, inst.b, c);
    case Method::J1SORlike: return solve_sorlike(inst.A, inst.b, c, SorSplit::Diagonal);
    case Method::GS1SORlike: return solve_sorlike(inst.A, inst.b, c, SorSplit::LowerTriangular);
    case Method::Newton: return solve_newton_symmetric(inst.A, inst.b, c);
    case Method::J2: return solve_j2(inst.A, inst.b, c);
    case Method::GS2: return solve_gs2(inst.A, inst.b, c);
    case Method::J3: return solve_j3(inst.A, inst.b, c);
    case Method::GS3: return solve_gs3(inst.A, inst.b, c);
    case Method::FULLM: return solve_fullm(inst.A, inst.b, c);
    case Method::TR:
    case Method::TAR:
    case Method::TAAR: return taar_solve(inst.A, inst.b, c, kind);
    case Method::AARLinear: return aar_linear_solve(inst.A.as_matrix(), inst.b, c);
  }
  throw std::invalid_argument("unknown-method");
}

bool certify_report(const ProblemInstance& inst, const SolverConfig& cfg, const SolveReport& rep) {
  if (!rep.converged) return false;
  const Vec x0 = cfg.x0 ? *cfg.x0 : inst.x0;
  const double rnorm = norm2(sub(inst.b, apply_xm1(inst.A, rep.solution)));
  if (cfg.stopping_mode == StoppingMode::Absolute) return rnorm <= cfg.tol;
  const double denom = norm2(sub(inst.b, apply_xm1(inst.A, x0)));
  return denom == 0.0 ? rnorm == 0.0 : rnorm / denom <= cfg.tol;
}

namespace {

SolverConfig config_for(const ProblemInstance& inst, const SolveRequest& req) {
  SolverConfig cfg;
  cfg.tol = req.tol.value_or(inst.tol);
  cfg.max_iter = req.max_iter;
  cfg.p = req.p;
  cfg.q = req.q;
  cfg.stopping_mode = inst.stopping_mode;
  cfg.x0 = inst.x0;
  return cfg;
}

}  // namespace

int run_solve(const SolveRequest& req, std::ostream& log) {
  const auto method = method_from_id(req.method);
  if (!method) {
    log << "error: unknown-method '" << req.method << "'\n";
    return 1;
  }
  const auto kind = precond_from_id(req.precond);
  if (!kind) {
    log << "error: unknown-precond '" << req.precond << "'\n";
    return 1;
  }
  SolveReport rep;
  ProblemInstance inst{"", DenseTensor(1, 1), {}, {}, {}, StoppingMode::Relative, 1e-8, {}};
  SolverConfig cfg;
  try {
    inst = make_problem(req);
    cfg = config_for(inst, req);
    cfg.method = *method;
    rep = dispatch_method(inst, *method, *kind, cfg);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }

  RunInfo info;
  info.problem = inst.label;
  info.method = req.method;
  const bool preconditioned = *method == Method::TR || *method == Method::TAR || *method == Method::TAAR;
  info.precond = preconditioned ? req.precond : "";
  info.m = inst.A.order();
  info.n = inst.A.dim();
  info.tol = cfg.tol;
  info.stopping_mode = cfg.stopping_mode;
  if (preconditioned || *method == Method::AARLinear) {
    info.p = cfg.p;
    info.q = cfg.q;
  }
  if (req.problem == "random" || req.problem == "appendix61") {
    info.seed = req.seed.value_or(default_seed());
    info.seeded = true;
  }

  std::string trace_path = req.out;
  const auto dotpos = trace_path.rfind(".json");
  if (dotpos != std::string::npos) trace_path.erase(dotpos);
  trace_path += ".trace.csv";
  write_report_json(req.out, info, rep);
  write_trace_csv(trace_path, rep);

  log << (rep.converged ? "converged" : "not-converged") << " method=" << req.method
      << " problem=" << inst.label << " iter=" << rep.iterations << " res="
      << format_double(rep.residual_history.empty() ? 0.0 : rep.residual_history.back())
      << " flops=" << (rep.cumulative_flops.empty() ? 0 : rep.cumulative_flops.back())
      << " cpu_s=" << format_double(rep.wall_time_s) << '\n';
  log << "report: " << req.out << "\ntrace:  " << trace_path << '\n';
  return rep.converged ? 0 : 2;
}

// ---- suites -----------------------------------------------------------------

namespace {

struct Cell {
  std::string case_label;
  Method method = Method::TAAR;
  PrecondKind kind = PrecondKind::PF;
  std::string precond_str;  // empty for unpreconditioned methods
  const ProblemInstance* inst = nullptr;
  SolverConfig cfg;
  std::uint64_t seed = 0;
  bool seeded = false;
  // results
  SolveReport rep;
  std::string band;
  bool pass = true;
  std::string error;
};

void run_cells(std::vector<Cell>& cells, int jobs) {
  jobs = std::max(1, jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      Cell& c = cells[i];
      try {
        c.rep = dispatch_method(*c.inst, c.method, c.kind, c.cfg);
      } catch (const std::exception& e) {
        c.error = e.what();
        c.pass = false;
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
}

void write_suite_csv(std::ostream& os, const std::string& suite, const std::vector<Cell>& cells) {
  os << "suite,case,method,precond,m,n,seed,iterations,converged,final_residual,total_flops,cpu_s,band,pass\n";
  for (const Cell& c : cells) {
    os << suite << ',' << c.case_label << ',' << method_id(c.method) << ',' << c.precond_str << ','
       << c.inst->A.order() << ',' << c.inst->A.dim() << ','
       << (c.seeded ? std::to_string(c.seed) : std::string()) << ',' << c.rep.iterations << ','
       << (c.rep.converged ? 1 : 0) << ','
       << format_double(c.rep.residual_history.empty() ? 0.0 : c.rep.residual_history.back()) << ','
       << (c.rep.cumulative_flops.empty() ? 0 : c.rep.cumulative_flops.back()) << ','
       << format_double(c.rep.wall_time_s) << ',' << c.band << ',' << (c.pass ? 1 : 0) << '\n';
  }
}

json load_bands(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("file-io: cannot open bands file " + path);
  json j;
  is >> j;
  return j;
}

std::string case_name(int m, int n) {
  return "(" + std::to_string(m) + "," + std::to_string(n) + ")";
}

long long flops_to_tol(const SolveReport& rep, double tol) {
  for (std::size_t k = 0; k < rep.residual_history.size(); ++k)
    if (rep.residual_history[k] <= tol) return rep.cumulative_flops[std::min(k, rep.cumulative_flops.size() - 1)];
  return -1;
}

}  // namespace

int run_suite(const std::string& name, bool full, int jobs, const std::string& out_dir,
              const std::string& bands_path, bool include_gs1, std::ostream& log) {
  const json bands = load_bands(bands_path);
  fs::create_directories(out_dir);
  const std::uint64_t seed = default_seed();
  std::vector<ProblemInstance> instances;
  std::vector<Cell> cells;
  bool all_pass = true;

  auto finish = [&](const std::vector<Cell>& done) {
    std::ofstream os(fs::path(out_dir) / (name + ".csv"));
    write_suite_csv(os, name, done);
    for (const Cell& c : done) {
      if (!c.error.empty()) log << "  error " << c.case_label << ' ' << method_id(c.method) << ": " << c.error << '\n';
      if (!c.pass) all_pass = false;
    }
    log << "suite " << name << ": " << (all_pass ? "all bands hold" : "BAND VIOLATION") << " ("
        << done.size() << " cells) -> " << (fs::path(out_dir) / (name + ".csv")).string() << '\n';
  };

  if (name == "table2" || name == "table3") {
    const json& spec = bands.at(name == "table2" ? "table2" : "table3");
    const json& case_list = bands.at("table2").at(full ? "full_cases" : "desk_cases");
    for (const auto& mn : case_list) {
      const int m = mn[0], n = mn[1];
      instances.push_back(gen_random_mtensor(m, n, 0.01, seed));
    }
    std::size_t idx = 0;
    for (const auto& mn : case_list) {
      const int m = mn[0], n = mn[1];
      const ProblemInstance& inst = instances[idx++];
      SolverConfig cfg;
      cfg.x0 = inst.x0;
      std::vector<Cell> group;
      if (name == "table2") {
        const int cap = spec.at(full ? "taar_iter_max_full" : "taar_iter_max_desk").get<int>();
        for (PrecondKind k : {PrecondKind::PJ, PrecondKind::PGS, PrecondKind::PF}) {
          Cell c{case_name(m, n), Method::TAAR, k, precond_id(k), &inst, cfg, seed, true, {}, {}, true, {}};
          c.band = "iter<=" + std::to_string(cap);
          group.push_back(std::move(c));
        }
        run_cells(group, jobs);
        for (Cell& c : group) c.pass = c.error.empty() && c.rep.converged && c.rep.iterations <= cap;
      } else {
        const int taar_cap = spec.at("taar_iter_max").get<int>();
        Cell taar{case_name(m, n), Method::TAAR, PrecondKind::PF, "pf", &inst, cfg, seed, true, {}, {}, true, {}};
        taar.band = "iter<=" + std::to_string(taar_cap);
        std::vector<Cell> tg{taar};
        run_cells(tg, 1);
        tg[0].pass = tg[0].error.empty() && tg[0].rep.converged && tg[0].rep.iterations <= taar_cap;
        const int taar_iters = tg[0].rep.iterations;
        group.push_back(std::move(tg[0]));

        std::vector<Method> baselines{Method::J1, Method::J1SORlike, Method::J2, Method::GS2,
                                      Method::GS3, Method::FULLM};
        if (include_gs1) {
          baselines.push_back(Method::GS1);
          baselines.push_back(Method::GS1SORlike);
        }
        std::vector<Cell> bg;
        for (Method meth : baselines)
          bg.push_back(Cell{case_name(m, n), meth, PrecondKind::PF, "", &inst, cfg, seed, true, {}, {}, true, {}});
        run_cells(bg, jobs);
        for (Cell& c : bg) {
          if (full) {
            const int floor_full = spec.at("baseline_min_iter_full").get<int>();
            c.band = "iter>=" + std::to_string(floor_full);
            c.pass = c.error.empty() && c.rep.converged && c.rep.iterations >= floor_full;
          } else {
            const double ratio = spec.at("baseline_min_ratio_desk").get<double>();
            const int floor_desk = int(ratio * taar_iters);
            c.band = "iter>=" + std::to_string(floor_desk);
            c.pass = c.error.empty() && c.rep.converged && c.rep.iterations >= floor_desk;
          }
          group.push_back(std::move(c));
        }
      }
      cells.insert(cells.end(), group.begin(), group.end());
    }
    finish(cells);
    return all_pass ? 0 : 3;
  }

  if (name == "table4") {
    const json& spec = bands.at("table4");
    for (const auto& entry : spec.at("cases")) {
      const int n = entry.at("n").get<int>();
      instances.push_back(gen_sine_symmetric(n));
    }
    std::size_t idx = 0;
    for (const auto& entry : spec.at("cases")) {
      const int n = entry.at("n").get<int>();
      const ProblemInstance& inst = instances[idx++];
      SolverConfig cfg;
      cfg.x0 = inst.x0;
      std::vector<Cell> group;
      const int taar_cap = entry.at("taar_pf_iter_max").get<int>();
      const int newton_cap = entry.at("newton_iter_max").get<int>();
      Cell ct{case_name(3, n), Method::TAAR, PrecondKind::PF, "pf", &inst, cfg, 0, false, {}, {}, true, {}};
      ct.band = "iter<=" + std::to_string(taar_cap);
      Cell cn{case_name(3, n), Method::Newton, PrecondKind::PF, "", &inst, cfg, 0, false, {}, {}, true, {}};
      cn.band = "iter<=" + std::to_string(newton_cap);
      group.push_back(std::move(ct));
      group.push_back(std::move(cn));
      run_cells(group, jobs);
      group[0].pass = group[0].error.empty() && group[0].rep.converged && group[0].rep.iterations <= taar_cap;
      group[1].pass = group[1].error.empty() && group[1].rep.converged && group[1].rep.iterations <= newton_cap;
      cells.insert(cells.end(), group.begin(), group.end());
    }
    finish(cells);
    return all_pass ? 0 : 3;
  }

  if (name == "table5") {
    const json& spec = bands.at("table5");
    instances.push_back(appendix_problem3());
    const ProblemInstance& inst = instances.back();
    SolverConfig cfg;
    cfg.x0 = inst.x0;
    const int tol_band = spec.at("iter_tolerance").get<int>();
    const int j2_ref = spec.at("j2_iter").get<int>();
    const int gs2_ref = spec.at("gs2_iter").get<int>();
    cells.push_back(Cell{"appendix3", Method::J2, PrecondKind::PF, "", &inst, cfg, 0, false, {}, {}, true, {}});
    cells.push_back(Cell{"appendix3", Method::GS2, PrecondKind::PF, "", &inst, cfg, 0, false, {}, {}, true, {}});
    run_cells(cells, jobs);
    cells[0].band = "iter in " + std::to_string(j2_ref) + "+-" + std::to_string(tol_band);
    cells[1].band = "iter in " + std::to_string(gs2_ref) + "+-" + std::to_string(tol_band);
    cells[0].pass = cells[0].error.empty() && cells[0].rep.converged &&
                    std::abs(cells[0].rep.iterations - j2_ref) <= tol_band;
    cells[1].pass = cells[1].error.empty() && cells[1].rep.converged &&
                    std::abs(cells[1].rep.iterations - gs2_ref) <= tol_band;
    finish(cells);
    return all_pass ? 0 : 3;
  }

  if (name == "table6") {
    const json& spec = bands.at("table6");
    instances.push_back(appendix_example61(seed));
    const ProblemInstance& inst = instances.back();
    SolverConfig cfg;
    cfg.x0 = inst.x0;
    cfg.stopping_mode = inst.stopping_mode;
    cfg.tol = inst.tol;
    const int tol_band = spec.at("iter_tolerance").get<int>();
    const int gs3_ref = spec.at("gs3_iter").get<int>();
    const int fullm_ref = spec.at("fullm_iter").get<int>();
    cells.push_back(Cell{"appendix61", Method::GS3, PrecondKind::PF, "", &inst, cfg, seed, true, {}, {}, true, {}});
    cells.push_back(Cell{"appendix61", Method::FULLM, PrecondKind::PF, "", &inst, cfg, seed, true, {}, {}, true, {}});
    run_cells(cells, jobs);
    cells[0].band = "iter in " + std::to_string(gs3_ref) + "+-" + std::to_string(tol_band);
    cells[1].band = "iter in " + std::to_string(fullm_ref) + "+-" + std::to_string(tol_band);
    cells[0].pass = cells[0].error.empty() && cells[0].rep.converged &&
                    std::abs(cells[0].rep.iterations - gs3_ref) <= tol_band;
    cells[1].pass = cells[1].error.empty() && cells[1].rep.converged &&
                    std::abs(cells[1].rep.iterations - fullm_ref) <= tol_band;
    finish(cells);
    return all_pass ? 0 : 3;
  }

  if (name == "fig1") {
    const json& case_list = bands.at("fig1").at(full ? "full_cases" : "desk_cases");
    for (const auto& mn : case_list) instances.push_back(gen_random_mtensor(mn[0], mn[1], 0.01, seed));
    std::size_t idx = 0;
    for (const auto& mn : case_list) {
      const int m = mn[0], n = mn[1];
      const ProblemInstance& inst = instances[idx++];
      SolverConfig cfg;
      cfg.x0 = inst.x0;
      std::vector<Cell> group;
      group.push_back(Cell{case_name(m, n), Method::TAAR, PrecondKind::PF, "pf", &inst, cfg, seed, true, {}, {}, true, {}});
      for (Method meth : {Method::J1, Method::J1SORlike, Method::J2, Method::GS2, Method::GS3, Method::FULLM})
        group.push_back(Cell{case_name(m, n), meth, PrecondKind::PF, "", &inst, cfg, seed, true, {}, {}, true, {}});
      run_cells(group, jobs);
      long long taar_cost = -1;
      for (Cell& c : group) {
        const long long cost = c.error.empty() ? flops_to_tol(c.rep, cfg.tol) : -1;
        std::ostringstream tag;
        tag << "m" << m << "_n" << n << "_" << method_id(c.method);
        write_trace_csv((fs::path(out_dir) / ("fig1_" + tag.str() + ".csv")).string(), c.rep);
        if (c.method == Method::TAAR) {
          taar_cost = cost;
          c.band = "lowest flops to tol";
        } else {
          c.band = "flops > taar";
        }
      }
      for (Cell& c : group) {
        const long long cost = c.error.empty() ? flops_to_tol(c.rep, cfg.tol) : -1;
        if (c.method == Method::TAAR)
          c.pass = cost >= 0;
        else
          c.pass = c.error.empty() && cost > taar_cost && taar_cost >= 0;
        cells.push_back(std::move(c));
      }
    }
    finish(cells);
    return all_pass ? 0 : 3;
  }

  if (name == "gravity") {
    const json& spec = bands.at("gravity");
    const int n = spec.at("n").get<int>();
    instances.push_back(gen_gravity_bvp(n));
    const ProblemInstance& inst = instances.back();
    const double c0 = inst.known_meta.at("c0");
    const double c1 = inst.known_meta.at("c1");
    const double grav = inst.known_meta.at("g");
    const double rel_tol = spec.at("parabola_rel_tol").get<double>();
    SolverConfig cfg;
    cfg.x0 = inst.x0;
    cfg.max_iter = spec.at("max_iter").get<int>();
    SolverConfig scaled = cfg;
    scaled.x0 = Vec(std::size_t(n), c0);
    // default-x0 row carries the converged+parabola band (known red: the
    // unsafeguarded TAR extrapolation ejects the iterate on this scaling);
    // the scaled-x0 row is band-checked on the parabola fit alone.
    std::vector<Cell> group;
    group.push_back(Cell{"gravity-x0-default", Method::TAAR, PrecondKind::PF, "pf", &inst, cfg, 0, false, {}, {}, true, {}});
    group.push_back(Cell{"gravity-x0-scaled", Method::TAAR, PrecondKind::PF, "pf", &inst, scaled, 0, false, {}, {}, true, {}});
    run_cells(group, jobs);
    const double alpha = c1 - c0 + grav / 2.0;
    for (std::size_t gi = 0; gi < group.size(); ++gi) {
      Cell& g = group[gi];
      double max_dev = 0.0;
      const std::string sol_name = gi == 0 ? "gravity_solution.csv" : "gravity_solution_scaled.csv";
      std::ofstream sol(fs::path(out_dir) / sol_name);
      sol << "t,x,parabola\n";
      for (int i = 0; i < n; ++i) {
        const double t = double(i) / double(n - 1);
        const double par = -0.5 * grav * t * t + alpha * t + c0;
        const double xi = g.error.empty() && int(g.rep.solution.size()) == n ? g.rep.solution[std::size_t(i)] : 0.0;
        max_dev = std::max(max_dev, std::abs(xi - par));
        sol << format_double(t) << ',' << format_double(xi) << ',' << format_double(par) << '\n';
      }
      const bool parabola_ok = g.error.empty() && max_dev <= rel_tol * c0;
      if (gi == 0) {
        g.band = "converged and max|x-parabola| <= " + format_double(rel_tol) + "*c0";
        g.pass = g.rep.converged && parabola_ok;
      } else {
        g.band = "max|x-parabola| <= " + format_double(rel_tol) + "*c0";
        g.pass = parabola_ok;
      }
      cells.push_back(std::move(g));
    }
    finish(cells);
    return all_pass ? 0 : 3;
  }

  log << "error: invalid-flags: unknown suite '" << name << "'\n";
  return 1;
}

// ---- acceptance --------------------------------------------------------------

namespace {

struct Criterion {
  int number;
  std::string name;
  bool pass;
  std::string detail;
};

std::string iters_of(const SolveReport& r) {
  return std::to_string(r.iterations) + (r.converged ? "" : " (not converged)");
}

Criterion criterion_sine_table4() {
  const int ns[5] = {50, 100, 200, 300, 400};
  const int taar_cap[5] = {12, 11, 12, 11, 9};
  const int newton_cap[5] = {8, 9, 10, 10, 11};
  detail::Stopwatch clock;
  bool ok = true;
  std::ostringstream det;
  for (int i = 0; i < 5; ++i) {
    const ProblemInstance inst = gen_sine_symmetric(ns[i]);
    SolverConfig cfg;
    cfg.x0 = inst.x0;
    const SolveReport taar = taar_solve(inst.A, inst.b, cfg, PrecondKind::PF);
    const SolveReport newton = solve_newton_symmetric(inst.A, inst.b, cfg);
    const bool taar_ok = taar.converged && taar.iterations <= taar_cap[i];
    const bool newton_ok = newton.converged && newton.iterations <= newton_cap[i];
    det << " n=" << ns[i] << " taar=" << iters_of(taar) << "/" << taar_cap[i]
        << " newton=" << iters_of(newton) << "/" << newton_cap[i] << ";";
    ok = ok && taar_ok && newton_ok;
  }
  const double secs = clock.seconds();
  det << " total " << format_double(secs) << "s/60s";
  ok = ok && secs < 60.0;
  return {1, "deterministic sine suite (TAAR-PF and Newton iteration caps)", ok, det.str()};
}

Criterion criterion_appendix3() {
  const ProblemInstance inst = appendix_problem3();
  SolverConfig cfg;
  cfg.x0 = inst.x0;
  const SolveReport j2 = solve_j2(inst.A, inst.b, cfg);
  const SolveReport gs2 = solve_gs2(inst.A, inst.b, cfg);
  const bool ok = j2.converged && std::abs(j2.iterations - 14) <= 2 && gs2.converged &&
                  std::abs(gs2.iterations - 10) <= 2;
  std::ostringstream det;
  det << "J2=" << iters_of(j2) << " (band 14+-2), GS2=" << iters_of(gs2) << " (band 10+-2)";
  return {2, "appendix problem: J2/GS2 iteration bands", ok, det.str()};
}

Criterion criterion_appendix61() {
  const ProblemInstance inst = appendix_example61(kBuiltinSeed);
  SolverConfig cfg;
  cfg.x0 = inst.x0;
  cfg.stopping_mode = inst.stopping_mode;
  cfg.tol = inst.tol;
  const SolveReport gs3 = solve_gs3(inst.A, inst.b, cfg);
  const SolveReport fullm = solve_fullm(inst.A, inst.b, cfg);
  const bool ok = gs3.converged && std::abs(gs3.iterations - 33) <= 4 && fullm.converged &&
                  std::abs(fullm.iterations - 31) <= 4;
  std::ostringstream det;
  det << "GS3=" << iters_of(gs3) << " (band 33+-4), FULLM=" << iters_of(fullm) << " (band 31+-4)";
  return {3, "appendix example 6.1: GS3/FULLM iteration bands (absolute 1e-11)", ok, det.str()};
}

Criterion criterion_acceleration() {
  const int cases[4][2] = {{3, 50}, {3, 100}, {4, 20}, {5, 10}};
  bool ok = true;
  std::ostringstream det;
  for (const auto& mn : cases) {
    const ProblemInstance inst = gen_random_mtensor(mn[0], mn[1], 0.01, kBuiltinSeed);
    SolverConfig cfg;
    cfg.x0 = inst.x0;
    const SolveReport taar = taar_solve(inst.A, inst.b, cfg, PrecondKind::PF);
    const bool taar_ok = taar.converged && taar.iterations <= 30;
    ok = ok && taar_ok;
    det << " " << case_name(mn[0], mn[1]) << " taar=" << iters_of(taar) << "/30";
    const std::pair<const char*, SolveReport> base[] = {
        {"j1", solve_j1(inst.A, inst.b, cfg)},   {"j2", solve_j2(inst.A, inst.b, cfg)},
        {"gs2", solve_gs2(inst.A, inst.b, cfg)}, {"gs3", solve_gs3(inst.A, inst.b, cfg)},
        {"fullm", solve_fullm(inst.A, inst.b, cfg)}};
    for (const auto& [bid, rep] : base) {
      const bool base_ok = rep.converged && rep.iterations >= 10 * taar.iterations;
      ok = ok && base_ok;
      det << " " << bid << "=" << rep.iterations;
    }
    det << ";";
  }
  return {4, "order-of-magnitude acceleration on random desk instances", ok, det.str()};
}

Criterion criterion_flops_dominance() {
  const ProblemInstance inst = gen_random_mtensor(3, 100, 0.01, kBuiltinSeed);
  SolverConfig cfg;
  cfg.x0 = inst.x0;
  const SolveReport taar = taar_solve(inst.A, inst.b, cfg, PrecondKind::PF);
  const long long taar_cost = flops_to_tol(taar, cfg.tol);
  bool ok = taar.converged && taar_cost >= 0;
  std::ostringstream det;
  det << "taar=" << taar_cost << " flops";
  const std::pair<const char*, SolveReport> base[] = {
      {"j1", solve_j1(inst.A, inst.b, cfg)},
      {"j1sor", solve_sorlike(inst.A, inst.b, cfg, SorSplit::Diagonal)},
      {"j2", solve_j2(inst.A, inst.b, cfg)},
      {"gs2", solve_gs2(inst.A, inst.b, cfg)},
      {"gs3", solve_gs3(inst.A, inst.b, cfg)},
      {"fullm", solve_fullm(inst.A, inst.b, cfg)}};
  for (const auto& [bid, rep] : base) {
    const long long cost = flops_to_tol(rep, cfg.tol);
    ok = ok && cost > taar_cost;
    det << " " << bid << "=" << cost;
  }
  return {5, "flops dominance on (3,100): TAAR-PF cheapest to 1e-8", ok, det.str()};
}

Criterion criterion_property_suite() {
  bool ok = true;
  std::ostringstream det;
  Xoshiro256pp rng(kBuiltinSeed ^ 0x5eedULL);

  // (a) telescoping identity on 1000 random (y, z, m) triples
  {
    bool sub_ok = true;
    for (int trial = 0; trial < 1000 && sub_ok; ++trial) {
      const int m = 2 + int(rng.next() % 5);  // 2..6
      const int n = 1 + int(rng.next() % 8);
      Vec y(std::size_t(n), 0.0), z(std::size_t(n), 0.0);
      for (double& v : y) v = 6.0 * rng.uniform01() - 3.0;
      for (double& v : z) v = 6.0 * rng.uniform01() - 3.0;
      const Vec lhs = sub(elementwise_pow(y, double(m - 1)), elementwise_pow(z, double(m - 1)));
      Vec sum(std::size_t(n), 0.0);
      for (int j = 0; j <= m - 2; ++j)
        sum = add(sum, hadamard(elementwise_pow(y, double(m - 2 - j)), elementwise_pow(z, double(j))));
      const Vec rhs = hadamard(sub(y, z), sum);
      for (int i = 0; i < n; ++i) {
        const double scale = std::max({1.0, std::pow(std::abs(y[std::size_t(i)]), double(m - 1)),
                                       std::pow(std::abs(z[std::size_t(i)]), double(m - 1))});
        if (std::abs(lhs[std::size_t(i)] - rhs[std::size_t(i)]) > 1e-10 * scale) sub_ok = false;
      }
    }
    ok = ok && sub_ok;
    det << "telescoping=" << (sub_ok ? "ok" : "FAIL");
  }

  // (b) J1/J3 iterate identity
  {
    const ProblemInstance inst = gen_random_mtensor(3, 8, 0.05, kBuiltinSeed + 1);
    SolverConfig cfg;
    cfg.x0 = inst.x0;
    cfg.record_iterates = true;
    const SolveReport j1 = solve_j1(inst.A, inst.b, cfg);
    const SolveReport j3 = solve_j3(inst.A, inst.b, cfg);
    bool sub_ok = j1.converged && j3.converged && j1.iterates.size() == j3.iterates.size();
    for (std::size_t k = 0; sub_ok && k < j1.iterates.size(); ++k)
      if (norm_inf(sub(j1.iterates[k], j3.iterates[k])) > 1e-12) sub_ok = false;
    ok = ok && sub_ok;
    det << " j1=j3=" << (sub_ok ? "ok" : "FAIL");
  }

  // (c)+(d) cross-method agreement, positivity, residual certificates
  {
    bool agree_ok = true, cert_ok = true;
    for (int trial = 0; trial < 20; ++trial) {
      const int m = 3 + int(rng.next() % 2);       // 3..4
      const int n = 4 + int(rng.next() % 7);       // 4..10
      const ProblemInstance inst = gen_random_mtensor(m, n, 0.01, kBuiltinSeed + 100 + trial);
      SolverConfig cfg;
      cfg.x0 = inst.x0;
      cfg.tol = 1e-10;  // headroom under the 1e-6 agreement band
      std::vector<SolveReport> reps;
      reps.push_back(solve_j1(inst.A, inst.b, cfg));
      reps.push_back(solve_gs1(inst.A, inst.b, cfg));
      reps.push_back(solve_sorlike(inst.A, inst.b, cfg, SorSplit::Diagonal));
      reps.push_back(solve_sorlike(inst.A, inst.b, cfg, SorSplit::LowerTriangular));
      reps.push_back(solve_j2(inst.A, inst.b, cfg));
      reps.push_back(solve_gs2(inst.A, inst.b, cfg));
      reps.push_back(solve_j3(inst.A, inst.b, cfg));
      reps.push_back(solve_gs3(inst.A, inst.b, cfg));
      reps.push_back(solve_fullm(inst.A, inst.b, cfg));
      reps.push_back(taar_solve(inst.A, inst.b, cfg, PrecondKind::PF));
      for (const SolveReport& r : reps) {
        if (!r.converged) continue;
        if (detail::any_nonpositive(r.solution)) cert_ok = false;
        if (!certify_report(inst, cfg, r)) cert_ok = false;
      }
      for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = i + 1; j < reps.size(); ++j) {
          if (!reps[i].converged || !reps[j].converged) continue;
          const double diff = norm_inf(sub(reps[i].solution, reps[j].solution));
          const double scale = std::max(1e-30, norm_inf(reps[i].solution));
          if (diff / scale > 1e-6) agree_ok = false;
        }
    }
    ok = ok && agree_ok && cert_ok;
    det << " agreement=" << (agree_ok ? "ok" : "FAIL") << " certificates=" << (cert_ok ? "ok" : "FAIL");
  }

  // (e) apply_xm2(A,x)·x vs apply_xm1(A,x)
  {
    bool sub_ok = true;
    for (int trial = 0; trial < 50 && sub_ok; ++trial) {
      const int m = 2 + int(rng.next() % 4);  // 2..5
      const int n = 2 + int(rng.next() % 7);
      DenseTensor a(m, n);
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = rng.uniform01();
      Vec x(std::size_t(n), 0.0);
      for (double& v : x) v = 0.5 + rng.uniform01();
      const Vec via_xm2 = matvec(apply_xm2(a, x), x);
      const Vec via_xm1 = apply_xm1(a, x);
      for (int i = 0; i < n; ++i) {
        const double scale = std::max(1.0, std::abs(via_xm1[std::size_t(i)]));
        if (std::abs(via_xm2[std::size_t(i)] - via_xm1[std::size_t(i)]) > 1e-12 * scale) sub_ok = false;
      }
    }
    ok = ok && sub_ok;
    det << " xm2.x=xm1=" << (sub_ok ? "ok" : "FAIL");
  }

  // (f) the worked majorization example
  {
    DenseTensor a(3, 3);
    std::array<int, 3> idx{};
    for (idx[0] = 0; idx[0] < 3; ++idx[0])
      for (idx[1] = 0; idx[1] < 3; ++idx[1])
        for (idx[2] = 0; idx[2] < 3; ++idx[2])
          a.at(idx) = double(9 * idx[2] + 3 * idx[0] + idx[1] + 1);
    const DenseMatrix mm = majorization_matrix(a);
    const double want[3][3] = {{1, 11, 21}, {4, 14, 24}, {7, 17, 27}};
    bool sub_ok = true;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (mm(i, j) != want[i][j]) sub_ok = false;
    ok = ok && sub_ok;
    det << " majorization=" << (sub_ok ? "ok" : "FAIL");
  }

  // (g) m = 2 reduction: TAAR-PJ vs linear AAR, identical sequences
  {
    const int n = 12;
    Xoshiro256pp mrng(kBuiltinSeed + 7);
    DenseTensor a(2, n);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = mrng.uniform_open01();
    const Vec rs = apply_xm1(a, ones(n));
    const double s = 1.2 * *std::max_element(rs.begin(), rs.end());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = -a[i];
    for (int i = 0; i < n; ++i) a[std::size_t(i) * std::size_t(n + 1)] += s;
    Vec b(std::size_t(n), 0.0);
    for (double& v : b) v = mrng.uniform_open01();
    SolverConfig cfg;
    cfg.tol = 1e-10;
    cfg.p = 3;
    cfg.q = 2;
    cfg.record_iterates = true;
    const SolveReport tensor_run = taar_solve(a, b, cfg, PrecondKind::PJ);
    const SolveReport linear_run = aar_linear_solve(a.as_matrix(), b, cfg);
    bool sub_ok = tensor_run.converged && linear_run.converged &&
                  tensor_run.iterations == linear_run.iterations;
    const std::size_t steps = std::min(tensor_run.iterates.size(), linear_run.iterates.size());
    for (std::size_t k = 0; sub_ok && k < steps; ++k) {
      const double scale = std::max(1.0, norm_inf(linear_run.iterates[k]));
      if (norm_inf(sub(tensor_run.iterates[k], linear_run.iterates[k])) > 1e-10 * scale) sub_ok = false;
    }
    ok = ok && sub_ok;
    det << " m2-reduction=" << (sub_ok ? "ok" : "FAIL");
  }

  // (h) hand-computed flops values
  {
    const bool sub_ok = flops_per_iteration(Method::J1, 3, 2) == 44 &&
                        flops_per_iteration(Method::FULLM, 3, 2) == 52 &&
                        flops_per_iteration(Method::TR, 3, 2) == 20 &&
                        flops_per_iteration(Method::J1, 4, 3) == 642 &&
                        flops_per_iteration(Method::J2, 4, 3) == 555 &&
                        flops_per_iteration(Method::FULLM, 4, 3) == 669 &&
                        flops_per_iteration(Method::TR, 4, 3) == 261;
    ok = ok && sub_ok;
    det << " flops=" << (sub_ok ? "ok" : "FAIL");
  }

  return {6, "property suite (telescoping, J1=J3, agreement, certificates, reductions, flops)", ok,
          det.str()};
}

double parabola_deviation(const ProblemInstance& inst, const SolveReport& rep) {
  const double c0 = inst.known_meta.at("c0");
  const double c1 = inst.known_meta.at("c1");
  const double grav = inst.known_meta.at("g");
  const double alpha = c1 - c0 + grav / 2.0;
  const int n = inst.A.dim();
  double max_dev = 0.0;
  for (int i = 0; i < n && int(rep.solution.size()) == n; ++i) {
    const double t = double(i) / double(n - 1);
    const double par = -0.5 * grav * t * t + alpha * t + c0;
    max_dev = std::max(max_dev, std::abs(rep.solution[std::size_t(i)] - par));
  }
  return max_dev;
}

// The criterion is measured as stated (default x0). On this scaling the
// unsafeguarded TAR extrapolation ejects the iterate from the positive cone
// and the run stalls, so the criterion is expected red; the scaled-x0 run is
// reported alongside as evidence that the physics solution is reached.
Criterion criterion_gravity() {
  const ProblemInstance inst = gen_gravity_bvp(20);
  const double c0 = inst.known_meta.at("c0");
  SolverConfig cfg;
  cfg.x0 = inst.x0;
  cfg.max_iter = 2000;
  const SolveReport rep = taar_solve(inst.A, inst.b, cfg, PrecondKind::PF);
  const double max_dev = parabola_deviation(inst, rep);
  const bool ok = rep.converged && max_dev <= 0.01 * c0;

  SolverConfig scaled = cfg;
  scaled.x0 = Vec(std::size_t(inst.A.dim()), c0);
  const SolveReport srep = taar_solve(inst.A, inst.b, scaled, PrecondKind::PF);
  const double sdev = parabola_deviation(inst, srep);

  std::ostringstream det;
  det << "default x0: iter=" << iters_of(rep) << " res=" << format_double(rep.residual_history.back())
      << " max|x-parabola|/c0=" << format_double(max_dev / c0) << " (<=0.01)"
      << "; scaled x0: res=" << format_double(srep.residual_history.back())
      << " max|x-parabola|/c0=" << format_double(sdev / c0);
  return {7, "gravity BVP parabola fit at n=20 (default x0)", ok, det.str()};
}

}  // namespace

int run_acceptance(std::ostream& log) {
  std::vector<Criterion> results;
  results.push_back(criterion_sine_table4());
  results.push_back(criterion_appendix3());
  results.push_back(criterion_appendix61());
  results.push_back(criterion_acceleration());
  results.push_back(criterion_flops_dominance());
  results.push_back(criterion_property_suite());
  results.push_back(criterion_gravity());
  bool all = true;
  for (const Criterion& c : results) {
    log << (c.pass ? "PASS" : "FAIL") << "  criterion " << c.number << ": " << c.name << " | "
        << c.detail << '\n';
    all = all && c.pass;
  }
  log << (all ? "acceptance: all criteria pass\n" : "acceptance: FAILURES present\n");
  return all ? 0 : 1;
}

}  // namespace mtaar
