#pragma once

#include <stdexcept>
#include <string>

namespace qentropy {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a composite space would exceed kMaxHilbertDim.
class ResourceLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A matrix failed a state, channel, or POVM invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PartitionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qentropy
