#pragma once

#include <stdexcept>
#include <string>

namespace arcscale {

// Every error raised for bad user input (files, parameters, data that
// violates a documented precondition) derives from Error. Anything else
// escaping the library is an internal fault.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class SeriesTooShortError : public Error {
 public:
  using Error::Error;
};

// Raised when too few window sizes give a nonzero fluctuation (e.g. a
// constant series).
class DegenerateSeriesError : public Error {
 public:
  using Error::Error;
};

class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

}  // namespace arcscale
