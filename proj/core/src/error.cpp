#include "lct/error.hpp"

namespace lct {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingCell: return "MissingCell";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DuplicateCell: return "DuplicateCell";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::UnknownRegion: return "UnknownRegion";
    case ErrorCode::UnknownIndicator: return "UnknownIndicator";
    case ErrorCode::InvalidShare: return "InvalidShare";
    case ErrorCode::NegativeQuantity: return "NegativeQuantity";
    case ErrorCode::OccupancyOutOfRange: return "OccupancyOutOfRange";
    case ErrorCode::SharesNotNormalized: return "SharesNotNormalized";
    case ErrorCode::MissingIndicator: return "MissingIndicator";
    case ErrorCode::ConstantColumn: return "ConstantColumn";
    case ErrorCode::NonPositiveOffset: return "NonPositiveOffset";
    case ErrorCode::SingleYear: return "SingleYear";
    case ErrorCode::AllMaxEntropy: return "AllMaxEntropy";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::BothZero: return "BothZero";
    case ErrorCode::YearMismatch: return "YearMismatch";
    case ErrorCode::RegionMismatch: return "RegionMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::LPFailure: return "LPFailure";
    case ErrorCode::InvalidPeriod: return "InvalidPeriod";
    case ErrorCode::AllInfeasible: return "AllInfeasible";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

ErrorCategory category(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingleYear:
    case ErrorCode::AllMaxEntropy:
    case ErrorCode::NumericalBreakdown:
    case ErrorCode::LPFailure:
    case ErrorCode::AllInfeasible:
    case ErrorCode::RankDeficient:
      return ErrorCategory::Numerical;
    default:
      return ErrorCategory::Validation;
  }
}

Error::Error(ErrorCode code, std::string module, const std::string& message)
    : std::runtime_error(module + ": " + std::string(to_string(code)) + ": " + message),
      code_(code),
      module_(std::move(module)),
      detail_(message) {}

Error Error::with_context(const std::string& context) const {
  return Error(code_, module_, context + ": " + detail_);
}

void fail(ErrorCode code, std::string module, const std::string& message) {
  throw Error(code, std::move(module), message);
}

}  // namespace lct
