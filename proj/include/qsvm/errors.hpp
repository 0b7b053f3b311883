#pragma once

#include <stdexcept>
#include <string>

namespace qsvm {

/// Base of every error raised by the library. The CLI maps these onto
/// exit codes: configuration and data problems are user errors (2).
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

class DataError : public Error {
  public:
    using Error::Error;
};

/// Malformed input files. The message carries the offending location.
class IngestionError : public DataError {
  public:
    using DataError::DataError;
};

/// Only one label present in a training set.
class DegenerateDataError : public DataError {
  public:
    using DataError::DataError;
};

class CircuitError : public Error {
  public:
    using Error::Error;
};

/// A parameter slot bound to a gate without a two-term shift rule.
class UnsupportedGateError : public CircuitError {
  public:
    using CircuitError::CircuitError;
};

} // namespace qsvm
