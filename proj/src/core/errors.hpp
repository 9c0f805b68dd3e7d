#pragma once

#include <stdexcept>
#include <string>

namespace hl {

// Exception hierarchy used throughout the core. The C API maps each class to
// one status code, so new error kinds need a matching code in harnacklab.h.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent user input (config files, tables, parameters).
class ConfigError : public Error {
public:
  using Error::Error;
};

// A point lies on the wrong side of a ball, or a model lacks an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

// Quadrature, bisection or LP failed to reach its tolerance.
class NumericalError : public Error {
public:
  using Error::Error;
};

// A requested value lies outside the attainable range of a scale.
class OutOfRangeError : public Error {
public:
  using Error::Error;
};

} // namespace hl
