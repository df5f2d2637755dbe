#pragma once

#include <stdexcept>
#include <string>

namespace pathex {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration (bad flag values, unreadable config).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data or a violated graph invariant.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A model backend failed: transport error, timeout, or a prediction that
/// violates the probability contract.
class BackendError : public Error {
 public:
  using Error::Error;
};

}  // namespace pathex
