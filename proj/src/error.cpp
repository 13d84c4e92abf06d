#include "ncerg/error.hpp"

namespace ncerg {

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHermitian: return "E_NOT_HERMITIAN";
    case ErrorCode::NotSquare: return "E_NOT_SQUARE";
    case ErrorCode::NotPSD: return "E_NOT_PSD";
    case ErrorCode::Singular: return "E_SINGULAR";
    case ErrorCode::DimensionMismatch: return "E_DIMENSION_MISMATCH";
    case ErrorCode::ClusteringAmbiguous: return "E_CLUSTERING_AMBIGUOUS";
    case ErrorCode::NotFaithful: return "E_NOT_FAITHFUL";
    case ErrorCode::NotInvariant: return "E_NOT_INVARIANT";
    case ErrorCode::TrivialProjection: return "E_TRIVIAL_PROJECTION";
    case ErrorCode::FamilyNotClosed: return "E_FAMILY_NOT_CLOSED";
    case ErrorCode::SupportNotInvariant: return "E_SUPPORT_NOT_INVARIANT";
    case ErrorCode::NotInvariantMeasure: return "E_NOT_INVARIANT_MEASURE";
    case ErrorCode::NotInAlgebra: return "E_NOT_IN_ALGEBRA";
    case ErrorCode::DimensionOverflow: return "E_DIMENSION_OVERFLOW";
    case ErrorCode::TwistIncompatible: return "E_TWIST_INCOMPATIBLE";
    case ErrorCode::InvalidArgument: return "E_INVALID_ARGUMENT";
    case ErrorCode::Parse: return "E_PARSE";
    case ErrorCode::Internal: return "E_INTERNAL";
  }
  return "E_UNKNOWN";
}

}  // namespace ncerg
