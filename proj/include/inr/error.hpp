#pragma once

#include <stdexcept>
#include <string>

namespace inr {

/// Malformed or inconsistent data handed to an operation.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration value outside its admissible range.
class InvalidParameter : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values or a failed factorization during a computation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace inr
