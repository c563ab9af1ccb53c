#pragma once

#include <stdexcept>
#include <string>

namespace carbofront {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

/// Evaluation point outside the domain of a field or profile.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested time is not stored in a trajectory.
class LookupError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Picard iteration did not reach its tolerance within the iteration cap.
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class NumericalBlowup : public Error {
 public:
  using Error::Error;
};

}  // namespace carbofront
