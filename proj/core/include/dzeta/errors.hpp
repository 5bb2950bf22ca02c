#pragma once

#include <stdexcept>
#include <string>

namespace dzeta {

/// Bad or inconsistent input: malformed files, violated preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arithmetic broke down at the working precision (tiny pivot, pole,
/// vanishing denominator, non-finite intermediate).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iteration did not settle within its budget or left its search window.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arithmetic between values carrying different precision contexts.
class ContextMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dzeta
