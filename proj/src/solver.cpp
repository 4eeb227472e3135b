// SPDX-License-Identifier: Apache-2.0

#include "mtaar/solver.hpp"

#include <stdexcept>

namespace mtaar {

std::string method_id(Method m) {
  switch (m) {
    case Method::J1: return "j1";
    case Method::GS1: return "gs1";
    case Method::J1SORlike: return "j1sor";
    case Method::GS1SORlike: return "gs1sor";
    case Method::Newton: return "newton";
    case Method::J2: return "j2";
    case Method::GS2: return "gs2";
    case Method::J3: return "j3";
    case Method::GS3: return "gs3";
    case Method::FULLM: return "fullm";
    case Method::TR: return "tr";
    case Method::TAR: return "tar";
    case Method::TAAR: return "taar";
    case Method::AARLinear: return "aar-linear";
  }
  return "?";
}

std::optional<Method> method_from_id(std::string_view id) {
  for (Method m : {Method::J1, Method::GS1, Method::J1SORlike, Method::GS1SORlike,
                   Method::Newton, Method::J2, Method::GS2, Method::J3, Method::GS3,
                   Method::FULLM, Method::TR, Method::TAR, Method::TAAR, Method::AARLinear})
    if (method_id(m) == id) return m;
  return std::nullopt;
}

std::string precond_id(PrecondKind k) {
  switch (k) {
    case PrecondKind::PJ: return "pj";
    case PrecondKind::PGS: return "pgs";
    case PrecondKind::PF: return "pf";
  }
  return "?";
}

std::optional<PrecondKind> precond_from_id(std::string_view id) {
  for (PrecondKind k : {PrecondKind::PJ, PrecondKind::PGS, PrecondKind::PF})
    if (precond_id(k) == id) return k;
  return std::nullopt;
}

void validate_config(const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("invalid-config: tol must be > 0");
  if (cfg.max_iter < 1) throw std::invalid_argument("invalid-config: max_iter must be >= 1");
  if (cfg.p < 2) throw std::invalid_argument("invalid-config: p must be >= 2");
  if (cfg.q < 1) throw std::invalid_argument("invalid-config: q must be >= 1");
}

}  // namespace mtaar
