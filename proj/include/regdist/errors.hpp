#pragma once

#include <stdexcept>
#include <string>

namespace regdist {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument values: eps <= 0, a <= 0, unsupported term orders.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A tabulated kernel was queried outside its node range.
class InterpolationRangeError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

// A moment or tail integral does not converge under the kernel's decay bound.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature ran out of subdivisions. Carries the best estimate.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double best_value, double error_estimate)
      : Error(what), best_value_(best_value), error_estimate_(error_estimate) {}

  double best_value() const noexcept { return best_value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_value_;
  double error_estimate_;
};

// Least-squares design is singular or too poorly spread to fit.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

// An analytic coefficient has a pole at the requested order.
class PoleError : public Error {
 public:
  using Error::Error;
};

// (a, eps) outside the two-scale regime eps <= a/10.
class RegimeError : public Error {
 public:
  using Error::Error;
};

class PoleAtOriginError : public Error {
 public:
  using Error::Error;
};

}  // namespace regdist
