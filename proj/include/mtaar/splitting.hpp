// SPDX-License-Identifier: Apache-2.0
//
// The nine baseline tensor splitting iterations behind one uniform solve
// interface: J1/GS1 and their SOR-like variants plus the symmetric Newton
// method (Ding & Wei), J2/GS2 (Li et al.), and J3/GS3/FULLM regular
// splittings (Liu et al.).

#pragma once

#include "mtaar/solver.hpp"

namespace mtaar {

SolveReport solve_j1(const DenseTensor& a, const Vec& b, const SolverConfig& cfg);
SolveReport solve_gs1(const DenseTensor& a, const Vec& b, const SolverConfig& cfg);

enum class SorSplit { Diagonal, LowerTriangular };
SolveReport solve_sorlike(const DenseTensor& a, const Vec& b, const SolverConfig& cfg, SorSplit m_part);

/// Newton iteration for symmetric systems; throws invalid-problem when the
/// tensor is not permutation-symmetric (1e-12 absolute).
SolveReport solve_newton_symmetric(const DenseTensor& a, const Vec& b, const SolverConfig& cfg);

// Splitting method 2. The paper derives these for symmetric systems but
// applies them to general tensors in its experiments; no symmetry gate here.
SolveReport solve_j2(const DenseTensor& a, const Vec& b, const SolverConfig& cfg);
SolveReport solve_gs2(const DenseTensor& a, const Vec& b, const SolverConfig& cfg);

// Splitting method 3 (regular splittings of the majorization matrix).
// J3 and J1 are the same iteration in program form and share one engine.
SolveReport solve_j3(const DenseTensor& a, const Vec& b, const SolverConfig& cfg);
SolveReport solve_gs3(const DenseTensor& a, const Vec& b, const SolverConfig& cfg);
SolveReport solve_fullm(const DenseTensor& a, const Vec& b, const SolverConfig& cfg);

}  // namespace mtaar
