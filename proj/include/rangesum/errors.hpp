#pragma once

#include <stdexcept>

namespace rangesum {

// Invalid caller input: out-of-range indices, parity violations, mismatched
// configurations.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A rejection sampler ran out of attempts for one node.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rangesum
