#pragma once

#include <stdexcept>
#include <string>

namespace udw {

/// Raised when an argument or configuration violates a documented precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Detectors closer to the mirror than the cutoff are treated as sitting on it.
class OnBoundaryError : public InputError {
 public:
  using InputError::InputError;
};

/// A special-function evaluation whose result (or an intermediate) leaves double range.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

}  // namespace udw
