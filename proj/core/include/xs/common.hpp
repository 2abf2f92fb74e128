#pragma once

#include <stdexcept>
#include <string>

namespace xs {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A gather or field does not have the shape an operation requires.
// The message names the offending axis.
class ShapeError : public Error {
public:
  explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Invalid geometry, scheme, or run parameters.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Numerical failure at run time (instability, solver breakdown).
class NumericError : public Error {
public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

// File format or filesystem failure.
class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace xs
