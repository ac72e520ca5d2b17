#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mogp {

/// Failure classes raised by the library. Each maps to one diagnosable cause so
/// that batch drivers can triage without parsing messages.
enum class ErrorKind {
  kDomain,                   // non-positive value where a positive one is required
  kNotConvertible,           // maximize objective that is not a monomial
  kDimensionMismatch,        // vector/space sizes disagree
  kInvalidWeights,           // preference weights off the open simplex
  kInvalidArgument,          // anything else rejected at the API boundary
  kDualInfeasible,           // normality/orthogonality system has no non-negative solution
  kUnbounded,                // dual objective increases without bound
  kMaxIterations,            // dual ascent stopped before converging
  kRecoveryImpossible,       // no usable primal-dual equation
  kInconsistentCertificate,  // primal-dual equations disagree (dual not optimal)
  kParse,                    // malformed problem document
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDomain: return "DomainError";
    case ErrorKind::kNotConvertible: return "NotConvertible";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kInvalidWeights: return "InvalidWeights";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kDualInfeasible: return "DualInfeasible";
    case ErrorKind::kUnbounded: return "Unbounded";
    case ErrorKind::kMaxIterations: return "MaxIterations";
    case ErrorKind::kRecoveryImpossible: return "RecoveryImpossible";
    case ErrorKind::kInconsistentCertificate: return "InconsistentCertificate";
    case ErrorKind::kParse: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mogp
