#pragma once

#include <stdexcept>
#include <string>

namespace htmr {

/// Base class for all errors raised by the library. Every htmr::Error is a
/// caller-side problem (bad argument, bad configuration); internal failures
/// surface as ordinary standard exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value lies outside its admissible range (probability outside [0,1], ...).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A mathematical operation is undefined for the given argument.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Recursion order exceeds the configured maximum.
class DepthError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent sizes or an invalid sweep/network configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace htmr
