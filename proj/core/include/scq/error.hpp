#pragma once

#include <stdexcept>
#include <string>

namespace scq {

// Malformed or out-of-contract input: bad dimensions, indices, file contents.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The inputs were well formed but the numerics could not deliver a result
// (rank-deficient design matrix, failed eigensolve).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scq
