#pragma once

#include <stdexcept>
#include <string>

namespace chargeqfi {

// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (e.g. closed form off the
// degeneracy point, finite-difference step pushing Gamma negative).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A real square root or inverse tangent in the closed-form solution has no
// real value at the requested point.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A numerical kernel produced output that breaks its own contract
// (non-Hermitian state, integrator step underflow, eigen residual too large).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Eigenbranches could not be matched unambiguously across a parameter shift.
class DegenerateDerivativeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace chargeqfi
