#pragma once

#include <stdexcept>
#include <string>

namespace drh {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: inverted ranges, unsupported moduli, malformed grids.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A documented size ceiling was exceeded (sieve bound, tau exactness, transform order).
class CeilingError : public Error {
 public:
  using Error::Error;
};

// A self-check or cross-check disagreed beyond its tolerance.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The tau table does not reach a prime the computation needs.
class TableTooSmall : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace drh
