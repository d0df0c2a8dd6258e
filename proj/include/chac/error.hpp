#pragma once

#include <stdexcept>
#include <string>

namespace chac {

/// Malformed or inconsistent input data (bad file contents, out-of-range
/// indices, asymmetric matrices, ...).
class input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A non-finite value reached a computation that requires finite numbers.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chac
