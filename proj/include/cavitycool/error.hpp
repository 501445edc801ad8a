#pragma once

#include <stdexcept>
#include <string>

namespace cavitycool {

/// Raised when caller-supplied input violates a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a numerical procedure cannot produce a trustworthy result
/// (singular solve, unstable integration, formula pole).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cavitycool
