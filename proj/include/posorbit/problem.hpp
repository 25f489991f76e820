#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "posorbit/coeff.hpp"

namespace posorbit {

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// x'' + p x' + q x = b / x^rho1 + c / x^rho2 + e, all coefficients
/// omega-periodic, c and e positive.
struct ProblemSpec {
  std::string name;
  PeriodicCoeff p;
  PeriodicCoeff q;
  PeriodicCoeff b;
  PeriodicCoeff c;
  PeriodicCoeff e;
  double rho1 = 1.0;
  double rho2 = 1.0;
  double omega = 1.0;
  std::optional<PeriodicCoeff> a1;       ///< candidate factor for the A1 check
  std::optional<double> dmax_reported;   ///< externally reported max |dG/dt|, evaluated alongside
};

/// Throws ValidationError naming the first violated requirement.
void validate(const ProblemSpec& spec);

/// True when rho1 and rho2 agree to 1e-12 relative.
bool same_exponent(double rho1, double rho2);

}  // namespace posorbit
