#pragma once

#include <stdexcept>
#include <string>

namespace curselab {

// Base of every error raised by the library. The CLI maps the concrete
// subclass onto an exit code, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidMatrix : public Error {
 public:
  using Error::Error;
};

class NotPsd : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class FactorizationMismatch : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class UnboundedDomain : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

class SingularMomentMatrix : public Error {
 public:
  using Error::Error;
};

class UnsupportedFactor : public Error {
 public:
  using Error::Error;
};

// Parameter outside its admissible range (alpha, epsilon, smoothness, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class AlphaOutOfRange : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

// Malformed configuration or point file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace curselab
