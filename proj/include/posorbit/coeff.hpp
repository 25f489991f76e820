#pragma once

#include "posorbit/expr.hpp"

namespace posorbit {

/// An omega-periodic scalar coefficient. Construction verifies periodicity
/// on a 256-point grid and throws std::invalid_argument when it fails.
class PeriodicCoeff {
 public:
  PeriodicCoeff(Expr expr, double period);

  double operator()(double t) const { return expr_.eval(t); }
  const Expr& expr() const { return expr_; }
  double period() const { return period_; }

  bool is_constant() const { return !expr_.depends_on_time(); }
  bool is_zero() const;

 private:
  Expr expr_;
  double period_;
};

/// Convenience constructor from expression text.
PeriodicCoeff make_coeff(std::string_view text, double period);

struct Extrema {
  double min;
  double max;
  double t_min;
  double t_max;
};

/// Global extrema over one period: 4096-point scan, then golden-section
/// refinement around the best 8 samples of each kind.
Extrema extrema(const PeriodicCoeff& c);

/// Integral over [t0, t1] by adaptive Gauss-Kronrod panels.
double integrate(const PeriodicCoeff& c, double t0, double t1);

/// (1/omega) * integral over one period.
double mean(const PeriodicCoeff& c);

/// (1/omega) * integral of max(0, f) over one period. Sign changes are
/// bracketed on the 4096-grid and bisected before quadrature.
double mean_positive_part(const PeriodicCoeff& c);

}  // namespace posorbit
