#pragma once

#include <stdexcept>
#include <string>

namespace qoe {

// Base for every error raised by the library. Callers that only care about
// "something in qoe failed" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class SingularInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Evidence assigns weight to an outcome the prior declares impossible.
class FalsifyingEvidence : public Error {
 public:
  using Error::Error;
};

class NonCommutingPrior : public Error {
 public:
  using Error::Error;
};

class NonPositiveBeta : public Error {
 public:
  using Error::Error;
};

class InvalidParameters : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Raised when a value violates a type invariant. Carries the name of the
// invariant and the measured residual so reports can be precise.
class ValidationError : public Error {
 public:
  ValidationError(std::string invariant, double residual, const std::string& what)
      : Error(what), invariant_(std::move(invariant)), residual_(residual) {}

  const std::string& invariant() const noexcept { return invariant_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string invariant_;
  double residual_;
};

// Two routes that must agree mathematically disagreed beyond tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qoe
