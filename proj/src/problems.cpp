// SPDX-License-Identifier: Apache-2.0

#include "mtaar/problems.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mtaar/rng.hpp"

namespace mtaar {

ProblemInstance gen_random_mtensor(int m, int n, double epsilon, std::uint64_t seed) {
  if (m < 3) throw std::invalid_argument("invalid-dimension: random M-tensor needs m >= 3");
  if (n < 2) throw std::invalid_argument("invalid-dimension: random M-tensor needs n >= 2");
  if (!(epsilon > 0.0)) throw std::invalid_argument("invalid-problem: epsilon must be > 0");
  Xoshiro256pp rng(seed);
  DenseTensor a(m, n);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = rng.uniform_open01();
  const Vec row_sums = apply_xm1(a, ones(n));
  const double s = (1.0 + epsilon) * *std::max_element(row_sums.begin(), row_sums.end());
  // A = sI − B in place
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = -a[i];
  std::size_t diag_stride = 0;
  std::size_t p = 1;
  for (int k = 0; k < m; ++k) {
    diag_stride += p;
    p *= std::size_t(n);
  }
  for (int i = 0; i < n; ++i) a[std::size_t(i) * diag_stride] += s;

  Vec b(std::size_t(n), 0.0);
  for (double& v : b) v = rng.uniform_open01();

  std::ostringstream label;
  label << "random-m" << m << "-n" << n << "-eps" << format_double(epsilon) << "-seed" << seed;
  ProblemInstance inst{label.str(), std::move(a), std::move(b), Vec(std::size_t(n), 0.1),
                       ones(n), StoppingMode::Relative, 1e-8, {}};
  inst.known_meta["epsilon"] = epsilon;
  inst.known_meta["s"] = s;
  inst.known_meta["seed"] = double(seed);
  return inst;
}

ProblemInstance gen_sine_symmetric(int n) {
  if (n < 2) throw std::invalid_argument("invalid-dimension: sine family needs n >= 2");
  const double s = double(n) * double(n);
  DenseTensor a(3, n);
  std::size_t flat = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++flat) {
        double v = -std::abs(std::sin(double(i + j + k + 3)));  // 1-based i+j+k
        if (i == j && j == k) v += s;
        a[flat] = v;
      }
  std::ostringstream label;
  label << "sine-n" << n;
  ProblemInstance inst{label.str(), std::move(a), ones(n), Vec(std::size_t(n), 0.1),
                       ones(n), StoppingMode::Relative, 1e-8, {}};
  inst.known_meta["s"] = s;
  return inst;
}

ProblemInstance gen_gravity_bvp(int n, double c0, double c1, double g_const, double mass) {
  if (n < 3) throw std::invalid_argument("invalid-dimension: gravity BVP needs n >= 3");
  if (!(c0 > 0.0) || !(c1 > 0.0)) throw std::invalid_argument("invalid-problem: c0, c1 must be > 0");
  DenseTensor a(4, n);
  auto set = [&](int i, int j, int k, int l, double v) {
    const std::array<int, 4> idx{i, j, k, l};
    a.at(idx) = v;
  };
  set(0, 0, 0, 0, 1.0);
  set(n - 1, n - 1, n - 1, n - 1, 1.0);
  const double third = 1.0 / 3.0;
  for (int i = 1; i < n - 1; ++i) {
    set(i, i, i, i, 2.0);
    set(i, i - 1, i, i, -third);
    set(i, i, i - 1, i, -third);
    set(i, i, i, i - 1, -third);
    set(i, i + 1, i, i, -third);
    set(i, i, i + 1, i, -third);
    set(i, i, i, i + 1, -third);
  }
  Vec b(std::size_t(n), g_const * mass / (double(n - 1) * double(n - 1)));
  b.front() = c0 * c0 * c0;
  b.back() = c1 * c1 * c1;

  Vec probe(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const double t = double(i) / double(n - 1);
    probe[std::size_t(i)] = 1.0 + t * (1.0 - t);
  }

  std::ostringstream label;
  label << "gravity-n" << n;
  ProblemInstance inst{label.str(), std::move(a), std::move(b), Vec(std::size_t(n), 0.1),
                       std::move(probe), StoppingMode::Relative, 1e-8, {}};
  inst.known_meta["c0"] = c0;
  inst.known_meta["c1"] = c1;
  inst.known_meta["G"] = g_const;
  inst.known_meta["M"] = mass;
  inst.known_meta["g"] = 9.8;
  return inst;
}

ProblemInstance appendix_problem3() {
  struct Entry {
    std::array<int, 4> multiset;  // 0-based, ascending
    double value;
  };
  // the one unlisted multiset {2,3,3,3} stays 0
  static const Entry entries[] = {
      {{0, 0, 0, 0}, 20.4982}, {{0, 0, 0, 1}, -0.0582}, {{0, 0, 0, 2}, -1.1719},
      {{0, 0, 1, 1}, 0.2236},  {{0, 0, 1, 2}, -0.0171}, {{0, 0, 2, 2}, 0.4597},
      {{0, 1, 1, 1}, 0.4880},  {{0, 1, 1, 2}, 0.1852},  {{0, 1, 2, 2}, -0.4087},
      {{0, 2, 2, 2}, 0.7639},  {{1, 1, 1, 1}, 10.0},    {{1, 1, 1, 2}, -0.6162},
      {{1, 1, 2, 2}, 0.1519},  {{2, 2, 2, 2}, 2.6311},
  };
  DenseTensor a(4, 3);
  std::array<int, 4> idx{};
  for (idx[0] = 0; idx[0] < 3; ++idx[0])
    for (idx[1] = 0; idx[1] < 3; ++idx[1])
      for (idx[2] = 0; idx[2] < 3; ++idx[2])
        for (idx[3] = 0; idx[3] < 3; ++idx[3]) {
          std::array<int, 4> key = idx;
          std::sort(key.begin(), key.end());
          for (const Entry& e : entries)
            if (e.multiset == key) {
              a.at(idx) = e.value;
              break;
            }
        }
  ProblemInstance inst{"appendix-problem3", std::move(a), Vec{1.0, 2.0, 3.0}, ones(3),
                       Vec{}, StoppingMode::Relative, 1e-8, {}};
  return inst;
}

ProblemInstance appendix_example61(std::uint64_t seed) {
  ProblemInstance inst = gen_random_mtensor(3, 5, 1.0, seed);
  inst.b = ones(5);
  inst.x0 = ones(5);
  inst.stopping_mode = StoppingMode::Absolute;
  inst.tol = 1e-11;
  std::ostringstream label;
  label << "appendix-example61-seed" << seed;
  inst.label = label.str();
  return inst;
}

// ---- serialization ----------------------------------------------------------

namespace {

std::string vec_to_string(const Vec& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_double(v[i]);
  }
  return out;
}

Vec vec_from_string(const std::string& s) {
  Vec v;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    double d = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), d);
    if (res.ec != std::errc{}) throw std::runtime_error("file-io: bad vector value '" + tok + "'");
    v.push_back(d);
  }
  return v;
}

}  // namespace

void save_instance(const ProblemInstance& inst, const std::string& base_path) {
  save_tensor_text(inst.A, base_path + ".tensor");
  std::ofstream os(base_path + ".meta");
  if (!os) throw std::runtime_error("file-io: cannot open " + base_path + ".meta");
  os << "label=" << inst.label << '\n';
  os << "stopping=" << (inst.stopping_mode == StoppingMode::Relative ? "relative" : "absolute") << '\n';
  os << "tol=" << format_double(inst.tol) << '\n';
  os << "b=" << vec_to_string(inst.b) << '\n';
  os << "x0=" << vec_to_string(inst.x0) << '\n';
  if (!inst.mtensor_probe.empty()) os << "probe=" << vec_to_string(inst.mtensor_probe) << '\n';
  for (const auto& [key, value] : inst.known_meta) os << "meta." << key << '=' << format_double(value) << '\n';
}

ProblemInstance load_instance(const std::string& base_path) {
  DenseTensor a = load_tensor_text_file(base_path + ".tensor");
  std::ifstream is(base_path + ".meta");
  if (!is) throw std::runtime_error("file-io: cannot open " + base_path + ".meta");
  ProblemInstance inst{"", std::move(a), {}, {}, {}, StoppingMode::Relative, 1e-8, {}};
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("file-io: bad meta line '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "label") inst.label = value;
    else if (key == "stopping") inst.stopping_mode = value == "absolute" ? StoppingMode::Absolute : StoppingMode::Relative;
    else if (key == "tol") inst.tol = std::stod(value);
    else if (key == "b") inst.b = vec_from_string(value);
    else if (key == "x0") inst.x0 = vec_from_string(value);
    else if (key == "probe") inst.mtensor_probe = vec_from_string(value);
    else if (key.rfind("meta.", 0) == 0) inst.known_meta[key.substr(5)] = std::stod(value);
  }
  return inst;
}

}  // namespace mtaar
