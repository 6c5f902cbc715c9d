#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sl3web {

enum class ErrorCode {
  NotADisk,
  BadAttachment,
  TypeMismatch,
  Unvalidated,
  SizeLimit,
  PatternMismatch,
  NormalizationStuck,
  FrozenVertex,
  ZeroDivision,
  BadConfiguration,
  ZeroInvariant,
  ExcludedCase,
  DistillationFailure,
  InconsistentRelations,
  AlternatingSignature,
  BadInput,
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotADisk: return "NotADisk";
    case ErrorCode::BadAttachment: return "BadAttachment";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::Unvalidated: return "Unvalidated";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::PatternMismatch: return "PatternMismatch";
    case ErrorCode::NormalizationStuck: return "NormalizationStuck";
    case ErrorCode::FrozenVertex: return "FrozenVertex";
    case ErrorCode::ZeroDivision: return "ZeroDivision";
    case ErrorCode::BadConfiguration: return "BadConfiguration";
    case ErrorCode::ZeroInvariant: return "ZeroInvariant";
    case ErrorCode::ExcludedCase: return "ExcludedCase";
    case ErrorCode::DistillationFailure: return "DistillationFailure";
    case ErrorCode::InconsistentRelations: return "InconsistentRelations";
    case ErrorCode::AlternatingSignature: return "AlternatingSignature";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "Unknown";
}

class Sl3Error : public std::runtime_error {
 public:
  Sl3Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Validation findings are data, not faults.
struct Violation {
  std::string where;
  std::string message;
};

using Violations = std::vector<Violation>;

}  // namespace sl3web
