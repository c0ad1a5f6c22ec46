#pragma once

#include <stdexcept>
#include <string>

namespace cca {

/// Malformed or out-of-contract input (bad file, invalid parameter).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A factorization or solve broke down (singular block, non-positive pivot).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured resource cap was exceeded (e.g. maximal clique count).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cca
