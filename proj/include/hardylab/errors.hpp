#pragma once

#include <stdexcept>
#include <string>

namespace hardylab {

// Coupling at or above the critical Hardy constant.
class SupercriticalCoupling : public std::domain_error {
 public:
  SupercriticalCoupling(double lambda, double critical);
  double lambda() const noexcept { return lambda_; }
  double critical() const noexcept { return critical_; }

 private:
  double lambda_;
  double critical_;
};

// Iteration caps, non-finite values, failed factorizations.
class NumericalFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hardylab
