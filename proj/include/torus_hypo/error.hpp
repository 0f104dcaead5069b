#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace torus_hypo {

enum class ErrorKind {
  InvalidInput,
  DigitStreamExhausted,
  NonPositiveDigit,
  OutOfRange,
  InsufficientData,
  GeometryError,
  OrderError,
  UncertifiableSign,
  MissingClassification,
  SolvabilityError,
  ProfileError,
  ZeroDivisorError,
  CompatibilityError,
  GridMismatch,
  MeanNotZero,
  LadderMismatch,
  IntegralityError,
  WitnessMismatch,
  RefusedHypoelliptic,
  NoSolverApplies,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace torus_hypo
