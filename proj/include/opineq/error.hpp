#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace opineq {

enum class ErrorKind {
  InvalidSpectrum,
  EmptySpectrum,
  NotSelfAdjoint,
  DecompositionFailure,
  BindingError,
  DomainViolation,
  EmptyBand,
  InvalidOrder,
  OutOfRange,
  NotConcaveLink,
  ZeroElement,
  InvalidDelta,
  DegenerateCut,
  LinkInconsistency,
  BudgetUnreachable,
  UnboundedSup,
  ClassViolation,
  BracketExhausted,
  TheoremViolation,
  InvalidArgument,
  IoFailure,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpectrum: return "InvalidSpectrum";
    case ErrorKind::EmptySpectrum: return "EmptySpectrum";
    case ErrorKind::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorKind::DecompositionFailure: return "DecompositionFailure";
    case ErrorKind::BindingError: return "BindingError";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::EmptyBand: return "EmptyBand";
    case ErrorKind::InvalidOrder: return "InvalidOrder";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NotConcaveLink: return "NotConcaveLink";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::InvalidDelta: return "InvalidDelta";
    case ErrorKind::DegenerateCut: return "DegenerateCut";
    case ErrorKind::LinkInconsistency: return "LinkInconsistency";
    case ErrorKind::BudgetUnreachable: return "BudgetUnreachable";
    case ErrorKind::UnboundedSup: return "UnboundedSup";
    case ErrorKind::ClassViolation: return "ClassViolation";
    case ErrorKind::BracketExhausted: return "BracketExhausted";
    case ErrorKind::TheoremViolation: return "TheoremViolation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace opineq
