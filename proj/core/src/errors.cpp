#include "codedshift/errors.hpp"

namespace codedshift {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DivisionByZeroInterval: return "DivisionByZeroInterval";
    case ErrorCode::NonPositiveArgument: return "NonPositiveArgument";
    case ErrorCode::RatioOutOfRange: return "RatioOutOfRange";
    case ErrorCode::EmptyCode: return "EmptyCode";
    case ErrorCode::OracleViolation: return "OracleViolation";
    case ErrorCode::TailNotBoundable: return "TailNotBoundable";
    case ErrorCode::LambdaTooSmall: return "LambdaTooSmall";
    case ErrorCode::NoRootBracket: return "NoRootBracket";
    case ErrorCode::RatioNotCertifiable: return "RatioNotCertifiable";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::InsufficientInputPrecision: return "InsufficientInputPrecision";
    case ErrorCode::LanguageLevelEmpty: return "LanguageLevelEmpty";
    case ErrorCode::EmptyS: return "EmptyS";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::DuplicateGenerator: return "DuplicateGenerator";
    case ErrorCode::NotQuasiGreedy: return "NotQuasiGreedy";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::GateNotSatisfied: return "GateNotSatisfied";
    case ErrorCode::DeclaredConstantMismatch: return "DeclaredConstantMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::NoLanguageOracle: return "NoLanguageOracle";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

}  // namespace codedshift
