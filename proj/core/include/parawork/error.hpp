#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace parawork {

enum class ErrorKind {
  NotPrime,
  EvenCharacteristic,
  Reducible,
  TooLarge,
  BadModulus,
  DivisionByZero,
  ShapeMismatch,
  InvariantViolation,
  NotAvoiding1D,
  ZeroMass,
  BadExponent,
  EmptyContent,
  NoDenseRect,
  BadAnnulus,
  BadDelta,
  BadParams,
  ChildDensityFailure,
  BadConfig,
  UnknownCommand,
  BadFormat,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
/// InvariantViolation marks a library defect; every other kind is a
/// violated precondition on the caller's side.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  bool is_precondition() const noexcept { return kind_ != ErrorKind::InvariantViolation; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::EvenCharacteristic: return "EvenCharacteristic";
    case ErrorKind::Reducible: return "Reducible";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::BadModulus: return "BadModulus";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::NotAvoiding1D: return "NotAvoiding1D";
    case ErrorKind::ZeroMass: return "ZeroMass";
    case ErrorKind::BadExponent: return "BadExponent";
    case ErrorKind::EmptyContent: return "EmptyContent";
    case ErrorKind::NoDenseRect: return "NoDenseRect";
    case ErrorKind::BadAnnulus: return "BadAnnulus";
    case ErrorKind::BadDelta: return "BadDelta";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::ChildDensityFailure: return "ChildDensityFailure";
    case ErrorKind::BadConfig: return "BadConfig";
    case ErrorKind::UnknownCommand: return "UnknownCommand";
    case ErrorKind::BadFormat: return "BadFormat";
  }
  return "Unknown";
}

}  // namespace parawork
