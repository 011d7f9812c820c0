#include "spencer/error.hpp"

namespace spencer {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AmbientMismatch: return "AmbientMismatch";
    case ErrorCode::NotASubspace: return "NotASubspace";
    case ErrorCode::DegreeUnderflow: return "DegreeUnderflow";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::MissingGrade: return "MissingGrade";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::EquationNotInvariant: return "EquationNotInvariant";
    case ErrorCode::NotASubcomplex: return "NotASubcomplex";
    case ErrorCode::CancellationFailure: return "CancellationFailure";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::InvalidFlag: return "InvalidFlag";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace spencer
