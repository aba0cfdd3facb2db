#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oco {

// Raised for non-finite inputs, negative values where none are allowed, and
// out-of-range coordinates.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a learner or decomposition is configured with parameters that
// break its guarantee (e.g. a non-positive strong-convexity constant).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition on a formula was violated by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace oco
