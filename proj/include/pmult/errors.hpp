#pragma once

#include <stdexcept>
#include <string>

namespace pmult {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

/// Bad input from the caller (invalid prime set, bad horizon, malformed file).
class UsageError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "UsageError"; }
};

class OverflowError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "OverflowError"; }
};

class UnsetValue : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "UnsetValue"; }
};

class NotFound : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "NotFound"; }
};

/// A construction step hit a state its correctness argument rules out.
/// These indicate a bug rather than bad input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "InvariantViolation"; }
};

#define PMULT_INVARIANT_ERROR(Name)                                  \
  class Name : public InvariantViolation {                           \
   public:                                                           \
    using InvariantViolation::InvariantViolation;                    \
    const char* kind() const noexcept override { return #Name; }     \
  };

PMULT_INVARIANT_ERROR(CaseFiveViolation)
PMULT_INVARIANT_ERROR(RelationConflict)
PMULT_INVARIANT_ERROR(CountingFailure)
PMULT_INVARIANT_ERROR(SurplusFailure)
PMULT_INVARIANT_ERROR(DependencyCycle)
PMULT_INVARIANT_ERROR(DecompositionMismatch)

#undef PMULT_INVARIANT_ERROR

}  // namespace pmult
