#include "qgc/error.hpp"

namespace qgc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::UnsupportedGraph: return "UnsupportedGraph";
    case ErrorCode::IrrationalRatio: return "IrrationalRatio";
    case ErrorCode::TangentPole: return "TangentPole";
    case ErrorCode::AssumptionsAViolated: return "AssumptionsAViolated";
    case ErrorCode::CosineDegenerate: return "CosineDegenerate";
    case ErrorCode::IncompatibleGraph: return "IncompatibleGraph";
    case ErrorCode::InvalidPotential: return "InvalidPotential";
    case ErrorCode::NotSorted: return "NotSorted";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroMatrixElement: return "ZeroMatrixElement";
    case ErrorCode::TangentViolation: return "TangentViolation";
    case ErrorCode::IllPosed: return "IllPosed";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NormMismatch: return "NormMismatch";
    case ErrorCode::NotReachable: return "NotReachable";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::MissingRequired: return "MissingRequired";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace qgc
