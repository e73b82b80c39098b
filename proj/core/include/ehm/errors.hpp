#pragma once

#include <stdexcept>
#include <string>

namespace ehm {

/// Input outside an operation's domain or precondition. Maps to CLI exit code 2.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical obstruction met during evaluation (symbol zero, small divisor,
/// exhausted precision). Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ehm
