#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

/// Invalid or incomplete configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base of all numerical failures (CLI exit code 3).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Mismatched axes or array shapes.
class ShapeError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Requested window or index range outside the representable axis.
class RangeError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Kernel undersampled by the trace step.
class ResolutionError : public NumericError {
 public:
  using NumericError::NumericError;
};

class BinningError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ModelError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Malformed input data, e.g. an unsorted time-tag stream.
class InputError : public NumericError {
 public:
  using NumericError::NumericError;
};

class RankError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Corrupt or truncated time-tag file (CLI exit code 4).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spdc
