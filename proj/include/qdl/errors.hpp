#pragma once

#include <stdexcept>
#include <string>

namespace qdl {

enum class ErrorKind {
  Validation,
  Schema,
  UnknownName,
  NonConvergent,
  SlowConvergence,
  PoleProximity,
  Infeasible,
  Topology,
  Positivity,
  DegenerateFlip,
  DegenerateQuad,
  DecayViolation,
  QuasiPeriodicity,
  LevelMismatch,
};

const char* kind_name(ErrorKind k);

struct Error : std::runtime_error {
  ErrorKind kind;
  Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// CLI exit status for an error kind: 1 validation, 2 numerics
int exit_code(ErrorKind k);

}  // namespace qdl
