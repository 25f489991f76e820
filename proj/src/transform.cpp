#include "posorbit/transform.hpp"

#include <cmath>

namespace posorbit {

double alpha_of(double rho1) {
  if (!(rho1 > 0.0)) throw ValidationError("rho1 must be positive");
  return 1.0 / (1.0 + rho1);
}

TransformedSpec to_y_equation(const ProblemSpec& spec) {
  const double alpha = alpha_of(spec.rho1);
  const double w = spec.omega;
  const Expr inv_alpha = Expr::constant(1.0 + spec.rho1);
  return TransformedSpec{
      .source = spec,
      .alpha = alpha,
      .exponent_c = 1.0 - alpha - alpha * spec.rho2,
      .exponent_e = 1.0 - alpha,
      .l = PeriodicCoeff(spec.q.expr() * inv_alpha, w),
      .c_over_alpha = PeriodicCoeff(spec.c.expr() * inv_alpha, w),
      .e_over_alpha = PeriodicCoeff(spec.e.expr() * inv_alpha, w),
      .b_over_alpha = PeriodicCoeff(spec.b.expr() * inv_alpha, w),
  };
}

SingularityClass singularity_class(const ProblemSpec& spec) {
  if (same_exponent(spec.rho1, spec.rho2)) return SingularityClass::Merged;
  return spec.rho1 > spec.rho2 ? SingularityClass::NoExtra : SingularityClass::TwoRepulsive;
}

const char* to_string(SingularityClass c) {
  switch (c) {
    case SingularityClass::NoExtra:
      return "NO_EXTRA";
    case SingularityClass::TwoRepulsive:
      return "TWO_REPULSIVE";
    case SingularityClass::Merged:
      return "MERGED";
  }
  return "?";
}

Trajectory x_from_y(const Trajectory& y, double alpha) {
  Trajectory x;
  x.t = y.t;
  x.x.resize(y.size());
  x.v.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y.x[i] > 0.0)) throw ValidationError("trajectory is not positive at t = " + std::to_string(y.t[i]));
    x.x[i] = std::pow(y.x[i], alpha);
    x.v[i] = alpha * std::pow(y.x[i], alpha - 1.0) * y.v[i];
  }
  return x;
}

Trajectory y_from_x(const Trajectory& x, double alpha) { return x_from_y(x, 1.0 / alpha); }

double residual(const ProblemSpec& spec, const Trajectory& traj, Equation which) {
  const std::size_t n = traj.size();
  if (n < 3) return 0.0;
  const double alpha = alpha_of(spec.rho1);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double t = traj.t[i];
    const double x = traj.x[i];
    const double v = traj.v[i];
    const double acc = (traj.v[i + 1] - traj.v[i - 1]) / (traj.t[i + 1] - traj.t[i - 1]);
    double r;
    if (which == Equation::Original) {
      r = acc + spec.p(t) * v + spec.q(t) * x - spec.b(t) * std::pow(x, -spec.rho1) -
          spec.c(t) * std::pow(x, -spec.rho2) - spec.e(t);
    } else {
      r = acc + spec.p(t) * v + spec.q(t) / alpha * x - spec.c(t) / alpha * std::pow(x, 1.0 - alpha - alpha * spec.rho2) -
          spec.e(t) / alpha * std::pow(x, 1.0 - alpha) - (1.0 - alpha) * v * v / x - spec.b(t) / alpha;
    }
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double forcing_scale(const ProblemSpec& spec, const Trajectory& traj, Equation which) {
  const double alpha = alpha_of(spec.rho1);
  double scale = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double e = std::abs(spec.e(traj.t[i]));
    scale = std::max(scale, which == Equation::Original ? e : e / alpha * std::pow(traj.x[i], 1.0 - alpha));
  }
  return scale;
}

}  // namespace posorbit
