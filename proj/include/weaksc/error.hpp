#pragma once

#include <stdexcept>
#include <string>

namespace weaksc {

/// Thrown when an operation's precondition on its arguments is violated.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed profile or tree files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant failed. Indicates a bug, never bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace weaksc
