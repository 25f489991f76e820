#pragma once

/**
 * @file transform.hpp
 * @brief The power substitution x = y^alpha, alpha = 1 / (1 + rho1).
 *
 * Under it the equation for x becomes
 *   y'' + p y' + (q/alpha) y = (c/alpha) y^(1-alpha-alpha rho2)
 *                              + (e/alpha) y^(1-alpha) + (1-alpha) y'^2 / y + b/alpha,
 * which carries no sign-indefinite singular term.
 */

#include <vector>

#include "posorbit/problem.hpp"

namespace posorbit {

struct TransformedSpec {
  ProblemSpec source;
  double alpha;
  double exponent_c;  ///< 1 - alpha - alpha * rho2
  double exponent_e;  ///< 1 - alpha
  PeriodicCoeff l;    ///< q / alpha
  PeriodicCoeff c_over_alpha;
  PeriodicCoeff e_over_alpha;
  PeriodicCoeff b_over_alpha;
};

double alpha_of(double rho1);

TransformedSpec to_y_equation(const ProblemSpec& spec);

enum class SingularityClass {
  NoExtra,       ///< rho1 > rho2: the c-term is regular
  TwoRepulsive,  ///< rho1 < rho2: the c-term is a second repulsive singularity
  Merged,        ///< rho1 = rho2: the c-term is merged with b
};

SingularityClass singularity_class(const ProblemSpec& spec);
const char* to_string(SingularityClass c);

/// Uniform samples of a scalar trajectory and its derivative.
struct Trajectory {
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> v;

  std::size_t size() const { return t.size(); }
};

/// x = y^alpha, x' = alpha y^(alpha-1) y'. Throws ValidationError if y <= 0.
Trajectory x_from_y(const Trajectory& y, double alpha);

/// Inverse map y = x^(1/alpha).
Trajectory y_from_x(const Trajectory& x, double alpha);

enum class Equation { Original, Transformed };

/// Max over interior samples of the plug-in residual, with the second
/// derivative from central differences of the stored first derivative.
double residual(const ProblemSpec& spec, const Trajectory& traj, Equation which);

/// Largest magnitude of the forcing term on the trajectory (e for the
/// original equation, (e/alpha) y^(1-alpha) for the transformed one);
/// used to scale residuals.
double forcing_scale(const ProblemSpec& spec, const Trajectory& traj, Equation which);

}  // namespace posorbit
