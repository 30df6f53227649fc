#pragma once

#include <stdexcept>
#include <string>

namespace qcov {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched qubit counts, vector lengths or gate indices.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input that cannot be mapped to a quantum state (e.g. an all-zero vector
/// under amplitude encoding).
class EncodingError : public Error {
 public:
  using Error::Error;
};

class GradientError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, int epoch)
      : Error(what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

/// Malformed model/profile/dataset files. The message carries the field path.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument values (negative budgets, zero shots, empty inputs).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcov
