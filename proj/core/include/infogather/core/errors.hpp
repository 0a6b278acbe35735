#pragma once

#include <stdexcept>
#include <string>

namespace infogather {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class NonFiniteOutput : public Error {
 public:
  using Error::Error;
};

/// The LQR gain matrix (R + B'QB) could not be inverted.
class SingularGain : public Error {
 public:
  using Error::Error;
};

/// The EKF innovation covariance could not be factored.
class SingularInnovation : public Error {
 public:
  using Error::Error;
};

class AllCandidatesInvalid : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Wraps another library error with the index of the step at which it happened.
class StepError : public Error {
 public:
  StepError(int step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}

  int step() const { return step_; }

 private:
  int step_;
};

void require_dim(long actual, long expected, const char* what);

}  // namespace infogather
