#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace diffalg {

enum class ErrorCode {
  ZeroDenominator,
  CyclicDefinition,
  NameClash,
  InvalidDefiningData,
  UnsupportedHandle,
  PsiNotRealizable,
  NotQuadratic,
  ZeroElement,
  FieldMismatch,
  DegenerateDenominator,
  DegenerateChord,
  NotConstant,
  IntegrandNotReducible,
  FNotBelow,
  UnsupportedTermKind,
  InvalidTerm,
  RoundTripFailure,
  NothingToReduce,
  ParseError,
  UnknownName,
  NonConstantCoefficient,
  DegreeLimitExceeded,
  InvalidArgument,
};

inline constexpr std::array kAllErrorCodes = {
    ErrorCode::ZeroDenominator,   ErrorCode::CyclicDefinition,
    ErrorCode::NameClash,         ErrorCode::InvalidDefiningData,
    ErrorCode::UnsupportedHandle, ErrorCode::PsiNotRealizable,
    ErrorCode::NotQuadratic,      ErrorCode::ZeroElement,
    ErrorCode::FieldMismatch,     ErrorCode::DegenerateDenominator,
    ErrorCode::DegenerateChord,   ErrorCode::NotConstant,
    ErrorCode::IntegrandNotReducible, ErrorCode::FNotBelow,
    ErrorCode::UnsupportedTermKind,   ErrorCode::InvalidTerm,
    ErrorCode::RoundTripFailure,  ErrorCode::NothingToReduce,
    ErrorCode::ParseError,        ErrorCode::UnknownName,
    ErrorCode::NonConstantCoefficient, ErrorCode::DegreeLimitExceeded,
    ErrorCode::InvalidArgument,
};

/// Stable identifier printed in reports, e.g. "ZeroDenominator".
constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::CyclicDefinition: return "CyclicDefinition";
    case ErrorCode::NameClash: return "NameClash";
    case ErrorCode::InvalidDefiningData: return "InvalidDefiningData";
    case ErrorCode::UnsupportedHandle: return "UnsupportedHandle";
    case ErrorCode::PsiNotRealizable: return "PsiNotRealizable";
    case ErrorCode::NotQuadratic: return "NotQuadratic";
    case ErrorCode::ZeroElement: return "ZeroElement";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::DegenerateChord: return "DegenerateChord";
    case ErrorCode::NotConstant: return "NotConstant";
    case ErrorCode::IntegrandNotReducible: return "IntegrandNotReducible";
    case ErrorCode::FNotBelow: return "FNotBelow";
    case ErrorCode::UnsupportedTermKind: return "UnsupportedTermKind";
    case ErrorCode::InvalidTerm: return "InvalidTerm";
    case ErrorCode::RoundTripFailure: return "RoundTripFailure";
    case ErrorCode::NothingToReduce: return "NothingToReduce";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::NonConstantCoefficient: return "NonConstantCoefficient";
    case ErrorCode::DegreeLimitExceeded: return "DegreeLimitExceeded";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Human-readable message used by the command line front end.
constexpr std::string_view error_message(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroDenominator: return "division by an element that reduces to zero";
    case ErrorCode::CyclicDefinition: return "defining data refers to a generator that is not yet declared";
    case ErrorCode::NameClash: return "generator or binding name is already in use";
    case ErrorCode::InvalidDefiningData: return "extension data is invalid for its kind";
    case ErrorCode::UnsupportedHandle: return "derivation handle is not available for this generator";
    case ErrorCode::PsiNotRealizable: return "psi(p) cannot be expressed in the tower";
    case ErrorCode::NotQuadratic: return "generator is not a square-root extension";
    case ErrorCode::ZeroElement: return "element must be nonzero";
    case ErrorCode::FieldMismatch: return "element lies outside the field required by the operation";
    case ErrorCode::DegenerateDenominator: return "addition law denominator vanishes";
    case ErrorCode::DegenerateChord: return "points are degenerate for the chord construction";
    case ErrorCode::NotConstant: return "value expected to be constant has nonzero derivative";
    case ErrorCode::IntegrandNotReducible: return "primitive has no logarithmic or elliptic tag to push down";
    case ErrorCode::FNotBelow: return "integrand involves the generator being eliminated";
    case ErrorCode::UnsupportedTermKind: return "term kind cannot be pushed through this extension";
    case ErrorCode::InvalidTerm: return "form term violates its curve or constant invariants";
    case ErrorCode::RoundTripFailure: return "reduced form no longer differentiates to the integrand";
    case ErrorCode::NothingToReduce: return "tower has no reducible extension left";
    case ErrorCode::ParseError: return "syntax error";
    case ErrorCode::UnknownName: return "unknown name";
    case ErrorCode::NonConstantCoefficient: return "form coefficient is not a constant";
    case ErrorCode::DegreeLimitExceeded: return "expression exceeded the total degree limit";
    case ErrorCode::InvalidArgument: return "invalid argument";
  }
  return "unknown error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}
  explicit Error(ErrorCode code) : Error(code, std::string(error_message(code))) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace diffalg
