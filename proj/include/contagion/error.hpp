#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace contagion {

enum class ErrorCode {
  NegativeEntry,
  NonzeroDiagonal,
  DimensionMismatch,
  NonFiniteEntry,
  InvalidDistribution,
  PaymentOutOfLattice,
  PriceNegative,
  NegativeLiquidation,
  StateOutOfLattice,
  EnumerationCapExceeded,
  UnsupportedModel,
  NestednessViolated,
  NoJumpFound,
  MalformedCsv,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Base exception for all library errors; carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace contagion
