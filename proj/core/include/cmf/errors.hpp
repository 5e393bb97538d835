#pragma once

#include <stdexcept>
#include <string>

namespace cmf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside its documented domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// The template has no energy on the observation band.
class ZeroEnergy : public Error {
 public:
  using Error::Error;
};

/// Every sampled frequency fell where the template spectrum vanishes.
class DegenerateMeasurement : public Error {
 public:
  using Error::Error;
};

/// A theorem hypothesis (e.g. time-bandwidth product >= 3) does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

/// A configuration document is malformed or names unknown options.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cmf
