#pragma once

#include <stdexcept>
#include <string>

namespace codedshift {

enum class ErrorCode {
  DivisionByZeroInterval,
  NonPositiveArgument,
  RatioOutOfRange,
  EmptyCode,
  OracleViolation,
  TailNotBoundable,
  LambdaTooSmall,
  NoRootBracket,
  RatioNotCertifiable,
  PrecisionExhausted,
  InsufficientInputPrecision,
  LanguageLevelEmpty,
  EmptyS,
  InvalidPermutation,
  DuplicateGenerator,
  NotQuasiGreedy,
  ShapeMismatch,
  BudgetExceeded,
  GateNotSatisfied,
  DeclaredConstantMismatch,
  ParseError,
  AlphabetMismatch,
  NoLanguageOracle,
  InvalidArgument,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_name(code)) + ": " + msg), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace codedshift
