#pragma once

/**
 * @file solver.hpp
 * @brief Positive periodic orbits by Newton shooting on the period map.
 */

#include <array>
#include <optional>
#include <stdexcept>

#include "posorbit/greens.hpp"
#include "posorbit/ode.hpp"
#include "posorbit/transform.hpp"

namespace posorbit {

/// x fell to or below the singularity guard.
class SingularityError : public ode::InadmissibleState {
 public:
  using ode::InadmissibleState::InadmissibleState;
};

/// Integration could not proceed (step underflow near the singularity).
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double t, double x, double v)
      : std::runtime_error(what), t(t), x(x), v(v) {}
  double t, x, v;  ///< last valid state
};

class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual(last_residual) {}
  double last_residual;
};

struct State {
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;
};

struct SolverOptions {
  double tol = 1e-8;             ///< periodicity residual for convergence
  double rtol = 1e-12;           ///< integrator relative tolerance
  int samples = 2048;            ///< dense-output intervals per period
  int max_newton = 50;
  std::optional<double> guard;   ///< overrides the default singularity guard
};

/// Natural amplitude mean(e) / mean(q); 1 when that is not positive.
double natural_amplitude(const ProblemSpec& spec);

/// Default guard 1e-6 * natural_amplitude.
double default_guard(const ProblemSpec& spec);

/// (x', v') of the first-order system. Throws SingularityError if x <= guard.
std::array<double, 2> rhs(const ProblemSpec& spec, double t, const State& s, double guard);

/// Uniform dense samples of the trajectory over [s0.t, t1] (`intervals` + 1
/// points; a single point for a zero span).
Trajectory integrate(const ProblemSpec& spec, const State& s0, double t1, int intervals, double rtol,
                     double guard);

/// State after one period.
State poincare(const ProblemSpec& spec, const State& s0, double rtol, double guard);

struct Orbit {
  State initial;
  Trajectory samples;
  double omega = 0.0;
  double periodicity_residual = 0.0;
  double ode_residual = 0.0;            ///< original equation
  double ode_residual_transformed = 0.0;
  double min_x = 0.0;
  double norm_y = 0.0;                  ///< max|y| + max|y'| with y = x^(1/alpha)
  int newton_steps = 0;
  double start_x = 0.0;                 ///< x(0) of the start that converged
};

/// Newton iteration on F(s) = P(s) - s from `guess` (default
/// (natural_amplitude, 0)), with multi-start over guess.x * {0.5, 0.75, 1.5, 2}.
Orbit find_periodic(const ProblemSpec& spec, std::optional<State> guess = std::nullopt,
                    const SolverOptions& opts = {});

/// Samples of y = x^(1/alpha), y' on the kernel grid (n + 1 points).
SampledFunction y_samples(const ProblemSpec& spec, const State& initial, int n, double rtol = 1e-12);

/// max |f| + max |f'|.
double c1_norm(const SampledFunction& f);

/// The integral operator whose fixed points are periodic solutions of the
/// transformed equation; `y` must be sampled on the kernel grid.
SampledFunction apply_T(const GreensFunction& green, const TransformedSpec& tspec, const SampledFunction& y);

/// ||y - T y|| / ||y|| in the C^1 norm.
double fixed_point_defect(const GreensFunction& green, const TransformedSpec& tspec, const SampledFunction& y);

struct ConeCheck {
  bool in_cone = false;
  double min_margin = 0.0;    ///< min y - sigma * ||y||
  double slope_margin = 0.0;  ///< min (delta * y - |y'|)
};

ConeCheck cone_check(const SampledFunction& y, double sigma, double delta);

}  // namespace posorbit
