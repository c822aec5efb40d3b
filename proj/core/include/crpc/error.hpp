#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crpc {

enum class ErrorKind {
  // discretization / input validation
  OddAngularCount,
  GridTooSmall,
  GridMismatch,
  NonFiniteSample,
  ParamOutOfRange,
  UnsupportedRatio,
  NotAdmissible,
  ConfigError,
  IoError,
  // hypotheses of the construction
  FlatPointDetected,
  NotNegativeK,
  NotMinimalSeed,
  NotElliptic,
  NoContinuousBranch,
  LogSingularity,
  MissingCoefficient,
  MissingTerm,
  OutsideRadius,
  // numerical failures
  SingularMode,
  NoConvergence,
  QuadratureFailure,
  Overflow,
  Diverged,
};

std::string_view to_string(ErrorKind kind) noexcept;

// True for failures of a numerical method (as opposed to rejected input).
bool is_solver_failure(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace crpc
