#pragma once

#include <stdexcept>
#include <string>

namespace popctl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: schema violations, failed hypotheses, broken preconditions.
/// The CLI maps it to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Solver or optimizer failure on otherwise valid input (exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace popctl
