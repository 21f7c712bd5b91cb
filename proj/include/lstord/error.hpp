#pragma once

#include <stdexcept>
#include <string>

namespace lstord {

// Bad or inconsistent user-supplied data (dimension mismatch, ragged rows,
// non-finite values, unknown labels).
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The computation is well-posed but the library declines to carry it out
// (singular covariance, target outside the positive orthant, enumeration
// budget exceeded).
class refusal_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lstord
