#pragma once

#include <stdexcept>
#include <string>

namespace gcsim {

// Base for everything the CLI maps to exit code 1.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid policy or simulator configuration (k < B, bad partition split, ...).
struct ConfigError : DomainError {
  using DomainError::DomainError;
};

// A policy emitted a LoadOp that breaks a model invariant.
struct PolicyViolation : DomainError {
  using DomainError::DomainError;
};

// Exhaustive oracle asked to search past its configured caps.
struct BudgetExceeded : DomainError {
  using DomainError::DomainError;
};

// An adversarial generator could not realize its construction.
struct ConstructionFailure : DomainError {
  using DomainError::DomainError;
};

// Malformed input file.
struct ParseError : DomainError {
  using DomainError::DomainError;
};

// Bad command line; the CLI maps this to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Polynomial fit on a constant working-set function.
struct DegenerateFit : DomainError {
  using DomainError::DomainError;
};

}  // namespace gcsim
