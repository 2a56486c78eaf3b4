#include "kktp/error.hpp"

namespace kktp {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::MissingDiagonalBlock: return "MissingDiagonalBlock";
    case ErrorCode::SingularPivotBlock: return "SingularPivotBlock";
    case ErrorCode::ZeroPivot: return "ZeroPivot";
    case ErrorCode::ZeroReference: return "ZeroReference";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorCode::SingularSchurComplement: return "SingularSchurComplement";
    case ErrorCode::SingularCoarseMatrix: return "SingularCoarseMatrix";
    case ErrorCode::UnknownVariant: return "UnknownVariant";
    case ErrorCode::InvertedElement: return "InvertedElement";
    case ErrorCode::LineSearchFailure: return "LineSearchFailure";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what, std::size_t index)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), index_(index) {}

void throw_error(ErrorCode code, const std::string& what, std::size_t index) {
  throw Error(code, what, index);
}

}  // namespace kktp
