#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spencer {

enum class ErrorCode {
  AmbientMismatch,
  NotASubspace,
  DegreeUnderflow,
  ShapeMismatch,
  MissingGrade,
  ZeroVector,
  UnsupportedDegree,
  ParamOutOfRange,
  CapExceeded,
  EquationNotInvariant,
  NotASubcomplex,
  CancellationFailure,
  SingularJacobian,
  InvalidFlag,
  ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spencer
