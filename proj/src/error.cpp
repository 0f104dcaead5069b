#include "torus_hypo/error.hpp"

namespace torus_hypo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DigitStreamExhausted: return "DigitStreamExhausted";
    case ErrorKind::NonPositiveDigit: return "NonPositiveDigit";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::GeometryError: return "GeometryError";
    case ErrorKind::OrderError: return "OrderError";
    case ErrorKind::UncertifiableSign: return "UncertifiableSign";
    case ErrorKind::MissingClassification: return "MissingClassification";
    case ErrorKind::SolvabilityError: return "SolvabilityError";
    case ErrorKind::ProfileError: return "ProfileError";
    case ErrorKind::ZeroDivisorError: return "ZeroDivisorError";
    case ErrorKind::CompatibilityError: return "CompatibilityError";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::MeanNotZero: return "MeanNotZero";
    case ErrorKind::LadderMismatch: return "LadderMismatch";
    case ErrorKind::IntegralityError: return "IntegralityError";
    case ErrorKind::WitnessMismatch: return "WitnessMismatch";
    case ErrorKind::RefusedHypoelliptic: return "RefusedHypoelliptic";
    case ErrorKind::NoSolverApplies: return "NoSolverApplies";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace torus_hypo
