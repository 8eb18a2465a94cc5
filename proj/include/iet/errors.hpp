#pragma once

#include <stdexcept>
#include <string>

namespace iet {

/// Malformed arguments: bad permutations, out-of-range cuts, short lattices.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exact integer quantity does not fit in 64 bits.
class CapacityError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Diffusivity outside the explicit scheme's stable range [0, 1/2].
class StabilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Curve fitting could not start (e.g. a series with no decay).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace iet
