#include "pluri/error.hpp"

namespace pluri {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::DhSingular: return "DhSingular";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NotACollision: return "NotACollision";
    case ErrorKind::Case1Unsupported: return "Case1Unsupported";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::GraphDisconnected: return "GraphDisconnected";
    case ErrorKind::IntegrandNonFinite: return "IntegrandNonFinite";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace pluri
