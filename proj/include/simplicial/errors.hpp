#pragma once

#include <stdexcept>
#include <string>

namespace simplicial {

// Shapes of operands disagree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scalar argument is outside its admissible range.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The input is well-formed but the operation is undefined on it
// (disconnected graph, empty softmax row, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The operation does not support this configuration (e.g. masked Jacobians).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed serialized input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace simplicial
