#pragma once

#include <stdexcept>
#include <string>

namespace rqbc {

// Precondition violated by the caller (bad index, non-Hermitian input, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Operator or state dimension beyond the supported 16.
class CapacityError : public std::length_error {
 public:
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

// Floating-point results that should be exact drifted past tolerance.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// An internal identity that must hold did not (e.g. a non-Hermitian Gamma).
class InconsistencyError : public std::logic_error {
 public:
  explicit InconsistencyError(const std::string& what) : std::logic_error(what) {}
};

// Honest-party rule broken, such as reusing a one-time pad.
class ProtocolFault : public std::runtime_error {
 public:
  explicit ProtocolFault(const std::string& what) : std::runtime_error(what) {}
};

class NonTerminationError : public std::runtime_error {
 public:
  explicit NonTerminationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rqbc
