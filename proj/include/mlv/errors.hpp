#pragma once

#include <stdexcept>
#include <string>

namespace mlv {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs that violate an operation's contract (mismatched shapes, moduli,
// supports, unmet lemma hypotheses).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An enumeration would exceed the configured desk-scale budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Malformed JSON or file content.
class ParseError : public Error {
 public:
  using Error::Error;
};

// The subvariety finder was handed the canonical empty variety.
class EmptyVarietyError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A guarantee that the construction relies on failed when re-checked by
// enumeration. Always an implementation bug, never an input problem.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace mlv
