#pragma once

#include <stdexcept>
#include <string>

namespace cavsq {

// Base of every error raised by the library. Callers that only care about
// "something went wrong" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class IncompleteBand : public Error {
 public:
  using Error::Error;
};

// Mean spin vanished, so the perpendicular plane is undefined.
class DegenerateDirection : public Error {
 public:
  using Error::Error;
};

class NoFiniteTime : public Error {
 public:
  using Error::Error;
};

class NoMinimum : public Error {
 public:
  using Error::Error;
};

class NumericFailure : public Error {
 public:
  NumericFailure(const std::string& what, double achieved_tolerance)
      : Error(what), achieved_tolerance_(achieved_tolerance) {}
  double achieved_tolerance() const noexcept { return achieved_tolerance_; }

 private:
  double achieved_tolerance_;
};

// A closed-form model was asked for a point outside the regime it covers.
class OutOfRegime : public Error {
 public:
  OutOfRegime(const std::string& what, double bound)
      : Error(what), bound_(bound) {}
  double bound() const noexcept { return bound_; }

 private:
  double bound_;
};

}  // namespace cavsq
