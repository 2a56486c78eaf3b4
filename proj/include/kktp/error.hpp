#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace kktp {

enum class ErrorCode {
  DimensionMismatch,
  IndexOutOfRange,
  InvalidArgument,
  SingularBlock,
  MissingDiagonalBlock,
  SingularPivotBlock,
  ZeroPivot,
  ZeroReference,
  NonFinite,
  SizeCapExceeded,
  SingularSchurComplement,
  SingularCoarseMatrix,
  UnknownVariant,
  InvertedElement,
  LineSearchFailure,
  Io,
  Parse,
};

const char* to_string(ErrorCode code) noexcept;

/// Library-wide exception. `index()` names the offending block row, pivot row
/// or element when the failure is local to one.
class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  Error(ErrorCode code, const std::string& what, std::size_t index = npos);

  ErrorCode code() const noexcept { return code_; }
  std::size_t index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::size_t index_;
};

[[noreturn]] void throw_error(ErrorCode code, const std::string& what, std::size_t index = Error::npos);

inline void require_same_size(std::size_t got, std::size_t expected, const char* what) {
  if (got != expected) {
    throw_error(ErrorCode::DimensionMismatch,
                std::string(what) + ": expected length " + std::to_string(expected) + ", got " +
                    std::to_string(got));
  }
}

}  // namespace kktp
