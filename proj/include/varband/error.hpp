#pragma once

#include <stdexcept>
#include <string>

namespace varband {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class UnsupportedProfile : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature or root finding did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class StepTooLarge : public Error {
 public:
  StepTooLarge(const std::string& what, double suggested)
      : Error(what), suggested_(suggested) {}
  double suggested_step() const { return suggested_; }

 private:
  double suggested_;
};

class ConditioningError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double tail)
      : Error(what), tail_(tail) {}
  double tail_mass() const { return tail_; }

 private:
  double tail_;
};

// Spectral grid too coarse for the requested evaluation point.
class UnderResolved : public Error {
 public:
  UnderResolved(const std::string& what, double required_x_max)
      : Error(what), required_(required_x_max) {}
  double required_x_max() const { return required_; }

 private:
  double required_;
};

}  // namespace varband
