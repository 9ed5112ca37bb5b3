#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lct {

enum class ErrorCode {
  // panel_core
  MissingCell,
  NonFinite,
  DuplicateCell,
  SchemaMismatch,
  UnknownRegion,
  UnknownIndicator,
  // emissions
  InvalidShare,
  NegativeQuantity,
  OccupancyOutOfRange,
  SharesNotNormalized,
  MissingIndicator,
  // index
  ConstantColumn,
  NonPositiveOffset,
  SingleYear,
  AllMaxEntropy,
  NonPositiveValue,
  // coupling
  OutOfRange,
  BothZero,
  YearMismatch,
  RegionMismatch,
  // lp / dea
  DimensionMismatch,
  NumericalBreakdown,
  LPFailure,
  InvalidPeriod,
  AllInfeasible,
  EmptyTable,
  // ekc
  RankDeficient,
  TooFewPoints,
  // plumbing
  Io,
  InvalidConfig,
};

/// Validation errors map to CLI exit code 2, numerical ones to 3.
enum class ErrorCategory { Validation, Numerical };

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string module, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }
  ErrorCategory category() const noexcept { return lct::category(code_); }
  /// The message without the module/code prefix.
  const std::string& detail() const noexcept { return detail_; }

  /// Same error with `context` prepended to the detail.
  Error with_context(const std::string& context) const;

 private:
  ErrorCode code_;
  std::string module_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorCode code, std::string module, const std::string& message);

}  // namespace lct
