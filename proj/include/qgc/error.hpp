#pragma once

#include <stdexcept>
#include <string>

namespace qgc {

enum class ErrorCode {
  NonPositiveLength,
  EmptyGraph,
  InvalidGraph,
  UnsupportedGraph,
  IrrationalRatio,
  TangentPole,
  AssumptionsAViolated,
  CosineDegenerate,
  IncompatibleGraph,
  InvalidPotential,
  NotSorted,
  DimensionMismatch,
  ZeroMatrixElement,
  TangentViolation,
  IllPosed,
  NoConvergence,
  NormMismatch,
  NotReachable,
  UnknownKey,
  TypeMismatch,
  MissingRequired,
  OutOfRange,
  ParseError,
  IoError,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries a code so callers (and the CLI
// exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qgc
