#pragma once

#include <stdexcept>
#include <string>

namespace logtr {

/// Invalid argument: out-of-range mode, bad permutation, negative threshold, etc.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operand shapes do not agree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite input or a failed decomposition.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The ADMM iteration produced non-finite values.
class DivergedError : public std::runtime_error {
 public:
  DivergedError(const std::string& what, int iteration)
      : std::runtime_error(what), iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

/// File read/write or decode failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace logtr
