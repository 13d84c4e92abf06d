#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncerg {

enum class ErrorCode {
  NotHermitian,
  NotSquare,
  NotPSD,
  Singular,
  DimensionMismatch,
  ClusteringAmbiguous,
  NotFaithful,
  NotInvariant,
  TrivialProjection,
  FamilyNotClosed,
  SupportNotInvariant,
  NotInvariantMeasure,
  NotInAlgebra,
  DimensionOverflow,
  TwistIncompatible,
  InvalidArgument,
  Parse,
  Internal,
};

/// Machine-readable code, e.g. "E_NOT_HERMITIAN".
std::string_view code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ncerg
