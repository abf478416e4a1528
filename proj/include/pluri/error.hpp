#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pluri {

enum class ErrorKind {
  DimensionMismatch,
  Singular,
  DhSingular,
  HypothesisViolated,
  DomainError,
  PreconditionViolated,
  NotACollision,
  Case1Unsupported,
  DegenerateDenominator,
  GraphDisconnected,
  IntegrandNonFinite,
  ParseError,
  ValidationError,
  Internal,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library. `stage` names the pipeline step for
/// multi-stage verifiers; `witness` carries the offending point when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::string stage = {},
        std::optional<std::vector<std::complex<double>>> witness = std::nullopt)
      : std::runtime_error(what), kind_(kind), stage_(std::move(stage)), witness_(std::move(witness)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::optional<std::vector<std::complex<double>>>& witness() const noexcept { return witness_; }

 private:
  ErrorKind kind_;
  std::string stage_;
  std::optional<std::vector<std::complex<double>>> witness_;
};

}  // namespace pluri
