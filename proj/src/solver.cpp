#include "posorbit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace posorbit {

namespace {

constexpr std::array<double, 4> kRestartFactors = {0.5, 0.75, 1.5, 2.0};

using Vec2 = std::array<double, 2>;

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double norm2(const Vec2& a) { return std::hypot(a[0], a[1]); }

struct Attempt {
  bool converged = false;
  State s;
  int steps = 0;
  double residual = std::numeric_limits<double>::infinity();
};

}  // namespace

double natural_amplitude(const ProblemSpec& spec) {
  const double qm = mean(spec.q);
  const double em = mean(spec.e);
  if (qm > 0.0 && em > 0.0) return em / qm;
  return 1.0;
}

double default_guard(const ProblemSpec& spec) { return 1e-6 * natural_amplitude(spec); }

std::array<double, 2> rhs(const ProblemSpec& spec, double t, const State& s, double guard) {
  if (!(s.x > guard)) {
    throw SingularityError("x = " + g(s.x) + " is at or below the singularity guard " + g(guard) + " at t = " + g(t));
  }
  const double acc = -spec.p(t) * s.v - spec.q(t) * s.x + spec.b(t) * std::pow(s.x, -spec.rho1) +
                     spec.c(t) * std::pow(s.x, -spec.rho2) + spec.e(t);
  return {s.v, acc};
}

Trajectory integrate(const ProblemSpec& spec, const State& s0, double t1, int intervals, double rtol,
                     double guard) {
  if (t1 < s0.t) throw std::invalid_argument("integration end precedes start");
  Trajectory out;
  if (t1 == s0.t || intervals < 1) {
    if (!(s0.x > guard)) rhs(spec, s0.t, s0, guard);
    out.t = {s0.t};
    out.x = {s0.x};
    out.v = {s0.v};
    return out;
  }
  std::vector<double> times(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) {
    times[static_cast<std::size_t>(i)] = (i == intervals) ? t1 : s0.t + (t1 - s0.t) * i / intervals;
  }
  ode::Options opt;
  opt.rtol = rtol;
  opt.atol = rtol * natural_amplitude(spec);
  auto f = [&](double t, const ode::Vec<2>& y) { return rhs(spec, t, State{t, y[0], y[1]}, guard); };
  auto admissible = [&](const ode::Vec<2>& y) { return y[0] > guard; };
  try {
    const auto run = ode::integrate<2>(f, s0.t, ode::Vec<2>{s0.x, s0.v}, times, opt, admissible);
    out.t = times;
    out.x.reserve(times.size());
    out.v.reserve(times.size());
    for (const auto& y : run.samples) {
      out.x.push_back(y[0]);
      out.v.push_back(y[1]);
    }
  } catch (const ode::StepUnderflow& e) {
    throw BlowUpError(std::string("integration blew up: ") + e.what(), e.t(), e.state()[0], e.state()[1]);
  }
  return out;
}

State poincare(const ProblemSpec& spec, const State& s0, double rtol, double guard) {
  const Trajectory tr = integrate(spec, s0, s0.t + spec.omega, 1, rtol, guard);
  return State{tr.t.back(), tr.x.back(), tr.v.back()};
}

namespace {

// F(s) = P(s) - s, or nullopt when the trajectory is not admissible.
std::optional<Vec2> period_defect(const ProblemSpec& spec, double x, double v, double rtol, double guard) {
  if (!(x > guard) || !std::isfinite(x) || !std::isfinite(v)) return std::nullopt;
  try {
    const State end = poincare(spec, State{0.0, x, v}, rtol, guard);
    const Vec2 d{end.x - x, end.v - v};
    if (!std::isfinite(d[0]) || !std::isfinite(d[1])) return std::nullopt;
    return d;
  } catch (const SingularityError&) {
    return std::nullopt;
  } catch (const BlowUpError&) {
    return std::nullopt;
  }
}

Attempt newton(const ProblemSpec& spec, State s, const SolverOptions& opts, double guard) {
  Attempt a;
  auto f = period_defect(spec, s.x, s.v, opts.rtol, guard);
  if (!f) return a;
  double r = norm2(*f);
  int stagnant = 0;
  for (int it = 0; it < opts.max_newton; ++it) {
    a.s = s;
    a.residual = r;
    a.steps = it;
    if (r <= opts.tol) {
      a.converged = true;
      return a;
    }
    // Forward-difference Jacobian of F.
    const double hx = 1e-6 * std::max(std::abs(s.x), 1.0);
    const double hv = 1e-6 * std::max(std::abs(s.v), 1.0);
    const auto fx = period_defect(spec, s.x + hx, s.v, opts.rtol, guard);
    const auto fv = period_defect(spec, s.x, s.v + hv, opts.rtol, guard);
    if (!fx || !fv) return a;
    const double j00 = ((*fx)[0] - (*f)[0]) / hx;
    const double j10 = ((*fx)[1] - (*f)[1]) / hx;
    const double j01 = ((*fv)[0] - (*f)[0]) / hv;
    const double j11 = ((*fv)[1] - (*f)[1]) / hv;
    const double det = j00 * j11 - j01 * j10;
    if (!std::isfinite(det) || std::abs(det) < 1e-300) return a;
    const double dx = -(j11 * (*f)[0] - j01 * (*f)[1]) / det;
    const double dv = -(-j10 * (*f)[0] + j00 * (*f)[1]) / det;

    double lambda = 1.0;
    std::optional<Vec2> last_valid;
    State last_state = s;
    bool decreased = false;
    for (int halving = 0; halving <= 20; ++halving, lambda *= 0.5) {
      const State trial{0.0, s.x + lambda * dx, s.v + lambda * dv};
      const auto ft = period_defect(spec, trial.x, trial.v, opts.rtol, guard);
      if (!ft) continue;
      last_valid = ft;
      last_state = trial;
      if (norm2(*ft) < r) {
        decreased = true;
        break;
      }
    }
    if (!last_valid) return a;
    if (!decreased && ++stagnant >= 5) return a;
    s = last_state;
    f = last_valid;
    r = norm2(*f);
  }
  a.s = s;
  a.residual = r;
  a.steps = opts.max_newton;
  a.converged = r <= opts.tol;
  return a;
}

}  // namespace

Orbit find_periodic(const ProblemSpec& spec, std::optional<State> guess, const SolverOptions& opts) {
  const double guard = opts.guard.value_or(default_guard(spec));
  const State start = guess.value_or(State{0.0, natural_amplitude(spec), 0.0});
  if (!(start.x > guard)) {
    throw SingularityError("initial guess x0 = " + g(start.x) + " is at or below the singularity guard " + g(guard));
  }
  std::vector<State> starts{start};
  for (double f : kRestartFactors) starts.push_back(State{0.0, start.x * f, start.v});

  double best_residual = std::numeric_limits<double>::infinity();
  for (const State& s0 : starts) {
    const Attempt a = newton(spec, s0, opts, guard);
    best_residual = std::min(best_residual, a.residual);
    if (!a.converged) continue;

    Orbit orbit;
    orbit.initial = State{0.0, a.s.x, a.s.v};
    orbit.omega = spec.omega;
    orbit.newton_steps = a.steps;
    orbit.start_x = s0.x;
    orbit.periodicity_residual = a.residual;
    orbit.samples = integrate(spec, orbit.initial, spec.omega, opts.samples, opts.rtol, guard);
    orbit.min_x = *std::min_element(orbit.samples.x.begin(), orbit.samples.x.end());
    orbit.ode_residual = residual(spec, orbit.samples, Equation::Original);
    const double alpha = alpha_of(spec.rho1);
    const Trajectory y = y_from_x(orbit.samples, alpha);
    orbit.ode_residual_transformed = residual(spec, y, Equation::Transformed);
    double ymax = 0.0, dymax = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      ymax = std::max(ymax, std::abs(y.x[i]));
      dymax = std::max(dymax, std::abs(y.v[i]));
    }
    orbit.norm_y = ymax + dymax;
    return orbit;
  }
  throw NoConvergence("Newton shooting did not converge from any start; best periodicity residual " + g(best_residual),
                      best_residual);
}

SampledFunction y_samples(const ProblemSpec& spec, const State& initial, int n, double rtol) {
  const Trajectory x = integrate(spec, State{0.0, initial.x, initial.v}, spec.omega, n, rtol, default_guard(spec));
  const Trajectory y = y_from_x(x, alpha_of(spec.rho1));
  return SampledFunction{spec.omega, y.x, y.v};
}

double c1_norm(const SampledFunction& f) {
  double a = 0.0, b = 0.0;
  for (double v : f.value) a = std::max(a, std::abs(v));
  for (double v : f.deriv) b = std::max(b, std::abs(v));
  return a + b;
}

SampledFunction apply_T(const GreensFunction& green, const TransformedSpec& ts, const SampledFunction& y) {
  if (y.value.size() != static_cast<std::size_t>(green.n) + 1) {
    throw std::invalid_argument("y must be sampled on the kernel grid");
  }
  std::vector<double> forcing(y.value.size());
  for (std::size_t i = 0; i < forcing.size(); ++i) {
    const double yi = y.value[i];
    if (!(yi > 0.0)) throw ValidationError("operator argument is not positive");
    const double t = green.node(static_cast<int>(i));
    const double dy = y.deriv[i];
    forcing[i] = ts.c_over_alpha(t) * std::pow(yi, ts.exponent_c) + ts.e_over_alpha(t) * std::pow(yi, ts.exponent_e) +
                 (1.0 - ts.alpha) * dy * dy / yi + ts.b_over_alpha(t);
  }
  return solve_linear(green, forcing);
}

double fixed_point_defect(const GreensFunction& green, const TransformedSpec& ts, const SampledFunction& y) {
  const SampledFunction ty = apply_T(green, ts, y);
  double dv = 0.0, dd = 0.0;
  for (std::size_t i = 0; i < y.value.size(); ++i) {
    dv = std::max(dv, std::abs(y.value[i] - ty.value[i]));
    dd = std::max(dd, std::abs(y.deriv[i] - ty.deriv[i]));
  }
  return (dv + dd) / c1_norm(y);
}

ConeCheck cone_check(const SampledFunction& y, double sigma, double delta) {
  ConeCheck c;
  const double norm = c1_norm(y);
  c.min_margin = std::numeric_limits<double>::infinity();
  c.slope_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < y.value.size(); ++i) {
    c.min_margin = std::min(c.min_margin, y.value[i] - sigma * norm);
    c.slope_margin = std::min(c.slope_margin, delta * y.value[i] - std::abs(y.deriv[i]));
  }
  c.in_cone = c.min_margin >= 0.0 && c.slope_margin >= 0.0;
  return c;
}

}  // namespace posorbit
