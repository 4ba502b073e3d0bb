#ifndef MECHKERNEL_ERRORS_HPP
#define MECHKERNEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mechkernel {

// Base for all mechkernel failures so callers can catch one type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input: schema violations, unparsable rationals, invariant
// failures at construction (non-stochastic columns, bad pmfs, ...).
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(what) {}
};

// Operation called with incompatible shapes.
class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

// A configured resource cap (solver size, enumeration bound) was hit.
// Callers must surface this as INCONCLUSIVE, never as a verdict.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& what) : Error(what) {}
};

}  // namespace mechkernel

#endif  // MECHKERNEL_ERRORS_HPP
