#pragma once

#include <stdexcept>
#include <string>

namespace arp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument outside a function's mathematical domain (log of zero, odd q, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent experiment configuration. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical contract was violated at run time (nonpositive predicted decrease,
/// stalled descent, singular Newton step, ...). The CLI maps this to exit code 3.
class NumericContractError : public Error {
 public:
  using Error::Error;
};

/// Raised by the subproblem solver when no admissible step can be produced.
class SubsolverError : public NumericContractError {
 public:
  using NumericContractError::NumericContractError;
};

/// Two Reals of different precision met in one operation.
class PrecisionMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace arp
