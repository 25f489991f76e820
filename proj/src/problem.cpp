#include "posorbit/problem.hpp"

#include <cmath>

namespace posorbit {

namespace {

void require_period(const PeriodicCoeff& c, const char* name, double omega) {
  if (std::abs(c.period() - omega) > 1e-12 * omega) {
    throw ValidationError(std::string(name) + " has period " + std::to_string(c.period()) + ", expected " +
                          std::to_string(omega));
  }
}

}  // namespace

void validate(const ProblemSpec& spec) {
  if (!(spec.omega > 0.0) || !std::isfinite(spec.omega)) throw ValidationError("omega must be positive");
  if (!(spec.rho1 > 0.0)) throw ValidationError("rho1 must be positive");
  if (!(spec.rho2 > 0.0)) throw ValidationError("rho2 must be positive");
  require_period(spec.p, "p", spec.omega);
  require_period(spec.q, "q", spec.omega);
  require_period(spec.b, "b", spec.omega);
  require_period(spec.c, "c", spec.omega);
  require_period(spec.e, "e", spec.omega);
  if (spec.a1) require_period(*spec.a1, "a1", spec.omega);
  if (!(extrema(spec.c).min > 0.0)) throw ValidationError("c must be positive");
  if (!(extrema(spec.e).min > 0.0)) throw ValidationError("e must be positive");
}

bool same_exponent(double rho1, double rho2) {
  return std::abs(rho1 - rho2) <= 1e-12 * std::max(std::abs(rho1), std::abs(rho2));
}

}  // namespace posorbit
