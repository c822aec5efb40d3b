#include "crpc/error.hpp"

namespace crpc {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::OddAngularCount: return "OddAngularCount";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NonFiniteSample: return "NonFiniteSample";
    case ErrorKind::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorKind::UnsupportedRatio: return "UnsupportedRatio";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::FlatPointDetected: return "FlatPointDetected";
    case ErrorKind::NotNegativeK: return "NotNegativeK";
    case ErrorKind::NotMinimalSeed: return "NotMinimalSeed";
    case ErrorKind::NotElliptic: return "NotElliptic";
    case ErrorKind::NoContinuousBranch: return "NoContinuousBranch";
    case ErrorKind::LogSingularity: return "LogSingularity";
    case ErrorKind::MissingCoefficient: return "MissingCoefficient";
    case ErrorKind::MissingTerm: return "MissingTerm";
    case ErrorKind::OutsideRadius: return "OutsideRadius";
    case ErrorKind::SingularMode: return "SingularMode";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::Diverged: return "Diverged";
  }
  return "Unknown";
}

bool is_solver_failure(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SingularMode:
    case ErrorKind::NoConvergence:
    case ErrorKind::QuadratureFailure:
    case ErrorKind::Overflow:
    case ErrorKind::Diverged:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace crpc
