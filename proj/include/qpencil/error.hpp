#pragma once

#include <stdexcept>
#include <string>

namespace qpencil {

/// Bad input: unsupported degree, zero leading coefficient, malformed
/// point or window. Maps to CLI exit code 1.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure: non-convergence, rank checks that do not hold,
/// internal inconsistency. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace qpencil
