#pragma once

#include <stdexcept>
#include <string>

namespace oodeval {

/// Violation of a numeric contract: non-finite inputs, invalid probability
/// distributions, mismatched dimensions, out-of-range indices.
class invalid_input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A supplied (a, b) affine map sent a score outside [0, 1].
class invalid_calibration_error : public invalid_input_error {
 public:
  using invalid_input_error::invalid_input_error;
};

/// Malformed input data: CSV syntax, manifest structure, file-level
/// inconsistencies. Messages name the offending file and line where known.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oodeval
