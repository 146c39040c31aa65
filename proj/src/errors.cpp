#include "qdl/errors.hpp"

namespace qdl {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::SlowConvergence: return "SlowConvergence";
    case ErrorKind::PoleProximity: return "PoleProximity";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::Topology: return "TopologyError";
    case ErrorKind::Positivity: return "PositivityViolation";
    case ErrorKind::DegenerateFlip: return "DegenerateFlip";
    case ErrorKind::DegenerateQuad: return "DegenerateQuad";
    case ErrorKind::DecayViolation: return "DecayViolation";
    case ErrorKind::QuasiPeriodicity: return "QuasiPeriodicityViolation";
    case ErrorKind::LevelMismatch: return "LevelMismatch";
  }
  return "Error";
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonConvergent:
    case ErrorKind::SlowConvergence:
    case ErrorKind::PoleProximity:
    case ErrorKind::DecayViolation:
      return 2;
    default:
      return 1;
  }
}

}  // namespace qdl
