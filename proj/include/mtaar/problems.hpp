// SPDX-License-Identifier: Apache-2.0
//
// Constructors for every benchmark problem: seeded random nonsingular
// M-tensors, the |sin| symmetric family, the gravitation boundary-value
// tensor, and the two hard-coded appendix problems.

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "mtaar/solver.hpp"

namespace mtaar {

struct ProblemInstance {
  std::string label;
  DenseTensor A;
  Vec b;
  Vec x0;
  // A documented strictly positive probe with A·probe^{m-1} > 0, certifying
  // the nonsingular M-tensor property; empty when no such claim is made
  // (appendix_problem3 is symmetric but not a Z-tensor).
  Vec mtensor_probe;
  StoppingMode stopping_mode = StoppingMode::Relative;
  double tol = 1e-8;
  std::map<std::string, double> known_meta;
};

/// A = sI − B with B_{i...} ~ U(0,1) i.i.d. (lexicographic draw order) and
/// s = (1+ε)·max_i (B e^{m-1})_i, then b ~ U(0,1), x0 = 0.1·e. Identical
/// seeds give bit-identical instances (see rng.hpp).
ProblemInstance gen_random_mtensor(int m, int n, double epsilon, std::uint64_t seed);

/// Order-3 symmetric family: A = n²·I − B, B_{ijk} = |sin(i+j+k)| with
/// 1-based indices; b = e.
ProblemInstance gen_sine_symmetric(int n);

/// Order-4 discretization of x'' = −G·M/x² with x(0)=c0, x(1)=c1 on an
/// n-point grid. The documented certifying probe is 1 + t(1−t) (interior
/// rows of A·probe³ evaluate to probe²·2h²; probe e gives exactly 0).
ProblemInstance gen_gravity_bvp(int n = 20, double c0 = 6.37e6, double c1 = 6.37e6,
                                double g_const = 6.67e-11, double mass = 5.98e24);

/// The fully symmetric order-4 3-dimensional tensor of the appendix
/// (14 listed independent entries, the absent multiset {2,3,3,3} taken as
/// 0), with b = (1,2,3)ᵀ and x0 = e.
ProblemInstance appendix_problem3();

/// Appendix Example 6.1: gen_random_mtensor(3, 5, 1.0, seed) with
/// b = x0 = e and absolute stopping at 1e-11.
ProblemInstance appendix_example61(std::uint64_t seed);

// Serialization: <base>.tensor in the tensor text format plus <base>.meta,
// a flat key=value sidecar (label, stopping, tol, b, x0, probe, meta.*).
void save_instance(const ProblemInstance& inst, const std::string& base_path);
ProblemInstance load_instance(const std::string& base_path);

}  // namespace mtaar
