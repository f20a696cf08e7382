#pragma once

#include <stdexcept>
#include <string>

namespace ampsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonPrimeOrder : public Error {
 public:
  explicit NonPrimeOrder(int n)
      : Error("amplifier size must be prime, got " + std::to_string(n)) {}
};

/// Raised when a dense 2^n object would exceed the dense-mode bound.
class Overflow : public Error {
 public:
  using Error::Error;
};

class NotNormalized : public Error {
 public:
  using Error::Error;
};

class UnsupportedInitialState : public Error {
 public:
  using Error::Error;
};

class IndefiniteForm : public Error {
 public:
  using Error::Error;
};

class ZeroMode : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ampsim
