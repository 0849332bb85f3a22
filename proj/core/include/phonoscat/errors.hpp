#pragma once

#include <stdexcept>
#include <string>

namespace phonoscat {

/// Input rejected by a precondition or type invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The numerics could not produce a trustworthy answer.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace phonoscat
