#pragma once

#include <stdexcept>
#include <string>

namespace mg1 {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad parameters or arguments supplied by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Traffic intensity at or above one; the stationary transforms do not exist.
class StabilityError : public InvalidArgument {
 public:
  StabilityError(const std::string& what, double rho) : InvalidArgument(what), rho_(rho) {}
  double rho() const noexcept { return rho_; }

 private:
  double rho_;
};

/// Input data that violates the departure-process invariants.
class CorruptData : public Error {
 public:
  using Error::Error;
};

/// Transform argument outside the region where the series is defined.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double bound) : Error(what), bound_(bound) {}
  double bound() const noexcept { return bound_; }

 private:
  double bound_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class NumericalSingularity : public Error {
 public:
  using Error::Error;
};

}  // namespace mg1
