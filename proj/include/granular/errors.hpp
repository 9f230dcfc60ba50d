#pragma once

#include <stdexcept>
#include <string>

namespace granular {

// Inconsistent unit algebra (e.g. adding meters to GeV).
class UnitError : public std::logic_error {
 public:
  explicit UnitError(const std::string& what) : std::logic_error(what) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Log-space value cannot be represented as a linear double.
class RangeError : public std::range_error {
 public:
  explicit RangeError(const std::string& what) : std::range_error(what) {}
};

// A sampler guard tripped (lambda too large for the requested sampler).
class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace granular
