#include "posorbit/hypotheses.hpp"

#include <cmath>
#include <limits>

#include "posorbit/transform.hpp"

namespace posorbit {

namespace {

constexpr double kRCap = 1e12;

double positive_root(double base, double exponent) { return base > 0.0 ? std::pow(base, exponent) : 0.0; }

// Inner-radius lower bound (1/sigma) (-neg/e_min)^(1/(1-alpha)), vacuous
// when neg >= 0.
double lower_bound(double neg, double e_min, double sigma, double alpha) {
  if (neg >= 0.0) return 0.0;
  return std::pow(-neg / e_min, 1.0 / (1.0 - alpha)) / sigma;
}

}  // namespace

Constants gather_constants(const ProblemSpec& spec, const GreensFunction& green) {
  Constants k;
  k.g_max = green.g_max;
  k.g_min = green.g_min;
  k.d_max = green.d_max;
  k.sigma = green.sigma;
  k.delta = green.delta;
  const Extrema b = extrema(spec.b);
  const Extrema c = extrema(spec.c);
  const Extrema e = extrema(spec.e);
  k.b_min = b.min;
  k.b_max = b.max;
  k.c_min = c.min;
  k.c_max = c.max;
  k.e_min = e.min;
  k.e_max = e.max;
  k.b_plus_mean = mean_positive_part(spec.b);
  return k;
}

Constants with_d_max(Constants c, double d_max) {
  c.d_max = d_max;
  const auto [sigma, delta] = sigma_delta(c.g_max, c.g_min, d_max);
  c.sigma = sigma;
  c.delta = delta;
  return c;
}

RBounds check_H1(const ProblemSpec& spec, const Constants& k) {
  const double alpha = alpha_of(spec.rho1);
  const double ec = 1.0 - alpha - alpha * spec.rho2;
  RBounds r;
  r.lo = lower_bound(k.b_min, k.e_min, k.sigma, alpha);
  r.hi = positive_root(k.g_min * k.c_min * spec.omega * std::pow(k.sigma, ec) / alpha, 1.0 / (alpha + alpha * spec.rho2));
  r.lo_strict = false;
  r.ok = r.hi > 0.0 && r.lo <= r.hi;
  return r;
}

H2Result check_H2(const ProblemSpec& spec, const Constants& k) {
  const double alpha = alpha_of(spec.rho1);
  H2Result h;
  h.value = (1.0 - alpha) * (k.g_max + k.delta * k.g_min) * k.delta * k.delta * spec.omega / k.sigma;
  h.ok = h.value < 1.0;
  return h;
}

RBounds check_H3(const ProblemSpec& spec, const Constants& k) {
  const double alpha = alpha_of(spec.rho1);
  RBounds r;
  r.lo = lower_bound(k.b_min, k.e_min, k.sigma, alpha);
  r.hi = positive_root(k.g_min * k.c_min * spec.omega / alpha, 1.0 / (alpha + alpha * spec.rho2));
  r.lo_strict = false;
  r.ok = r.hi > 0.0 && r.lo <= r.hi;
  return r;
}

RBounds check_H4(const ProblemSpec& spec, const Constants& k) {
  const double alpha = alpha_of(spec.rho1);
  RBounds r;
  r.lo = lower_bound(k.b_min + k.c_min, k.e_min, k.sigma, alpha);
  r.hi = k.g_min * k.b_plus_mean * spec.omega / alpha;
  r.lo_strict = true;
  r.ok = r.lo < r.hi;
  return r;
}

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::T3_1:
      return "T3.1";
    case Theorem::T3_2:
      return "T3.2";
    case Theorem::T3_3_I:
      return "T3.3-I";
    case Theorem::T3_3_II:
      return "T3.3-II";
    case Theorem::None:
      return "NONE";
  }
  return "?";
}

std::string to_string(PositivitySource s) {
  switch (s) {
    case PositivitySource::ClosedForm:
      return "closed-form";
    case PositivitySource::A1:
      return "A1";
    case PositivitySource::A2:
      return "A2";
    case PositivitySource::Chu:
      return "Chu";
    case PositivitySource::Grid:
      return "grid";
    case PositivitySource::None:
      return "none";
  }
  return "?";
}

Theorem dispatch(const ProblemSpec& spec, const Constants& k) {
  if (same_exponent(spec.rho1, spec.rho2)) return k.b_min + k.c_min >= 0.0 ? Theorem::T3_3_I : Theorem::T3_3_II;
  return spec.rho1 > spec.rho2 ? Theorem::T3_1 : Theorem::T3_2;
}

double growth_lhs(const ProblemSpec& spec, const Constants& k, Theorem theorem, double R) {
  const double alpha = alpha_of(spec.rho1);
  const double ec = 1.0 - alpha - alpha * spec.rho2;
  const double linear = (1.0 - alpha) * k.delta * k.delta / k.sigma * R;
  const double e_term = k.e_max / alpha * std::pow(R, 1.0 - alpha);
  double bracket = 0.0;
  switch (theorem) {
    case Theorem::T3_1:
      bracket = k.c_max / alpha * std::pow(R, ec) + e_term + linear + k.b_max / alpha;
      break;
    case Theorem::T3_2:
      bracket = k.c_max * std::pow(k.sigma, ec) / alpha * std::pow(R, ec) + e_term + linear + k.b_max / alpha;
      break;
    case Theorem::T3_3_I:
    case Theorem::T3_3_II:
      bracket = e_term + linear + (k.b_max + k.c_max) / alpha;
      break;
    case Theorem::None:
      return std::numeric_limits<double>::infinity();
  }
  return (k.g_max + k.delta * k.g_min) * bracket * spec.omega;
}

std::optional<double> find_R(const ProblemSpec& spec, const Constants& k, Theorem theorem, double r_lo) {
  auto holds = [&](double R) { return growth_lhs(spec, k, theorem, R) <= R; };
  const double start = r_lo > 0.0 ? 2.0 * r_lo : 1e-3;
  double lo = 0.0;  // largest known failing radius
  double hi = 0.0;  // smallest known holding radius
  if (holds(start)) {
    hi = start;
    // Walk down while the inequality still holds above r_lo.
    for (;;) {
      const double next = 0.5 * hi;
      if (next <= r_lo) return hi;
      if (!holds(next)) {
        lo = next;
        break;
      }
      hi = next;
      if (hi < 1e-300) return hi;
    }
  } else {
    lo = start;
    for (double R = 2.0 * start; R <= kRCap; R *= 2.0) {
      if (holds(R)) {
        hi = R;
        break;
      }
      lo = R;
    }
    if (hi == 0.0) {
      if (holds(kRCap)) {
        hi = kRCap;
      } else {
        return std::nullopt;
      }
    }
  }
  while ((hi - lo) > 1e-7 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (holds(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

GreensFunction select_green(const ProblemSpec& spec, int n) {
  const TransformedSpec ts = to_y_equation(spec);
  if (spec.p.is_zero() && ts.l.is_constant()) {
    const double l = *ts.l.expr().constant_value();
    if (l > 0.0) return closed_form_constant(std::sqrt(l), spec.omega, n);
  }
  return numeric_periodic_green(spec.p, ts.l, spec.omega, n);
}

namespace {

Evaluation evaluate(const ProblemSpec& spec, const Constants& k, Theorem theorem, std::string label) {
  Evaluation ev;
  ev.label = std::move(label);
  ev.constants = k;
  ev.h2 = check_H2(spec, k);
  const double alpha = alpha_of(spec.rho1);
  switch (theorem) {
    case Theorem::T3_1:
      ev.h1 = check_H1(spec, k);
      ev.r_interval = ev.h1;
      break;
    case Theorem::T3_2:
      ev.h3 = check_H3(spec, k);
      ev.r_interval = ev.h3;
      break;
    case Theorem::T3_3_II:
      ev.h4 = check_H4(spec, k);
      ev.r_interval = ev.h4;
      break;
    case Theorem::T3_3_I: {
      // Any r below (G_* e_* sigma^(1-alpha) w / alpha)^(1/alpha) works.
      RBounds r;
      r.lo = 0.0;
      r.lo_strict = true;
      r.hi = positive_root(k.g_min * k.e_min * std::pow(k.sigma, 1.0 - alpha) * spec.omega / alpha, 1.0 / alpha);
      r.ok = r.hi > 0.0;
      ev.r_interval = r;
      break;
    }
    case Theorem::None:
      ev.reason = "no theorem applies";
      return ev;
  }
  if (!ev.h2.ok) {
    ev.reason = "H2 fails: value " + std::to_string(ev.h2.value) + " >= 1";
    return ev;
  }
  if (!ev.r_interval->ok) {
    ev.reason = "admissible r-interval is empty";
    return ev;
  }
  ev.R_witness = find_R(spec, k, theorem, ev.r_interval->lo);
  if (!ev.R_witness) {
    ev.reason = "no R <= 1e12 satisfies the growth inequality";
    return ev;
  }
  ev.R_exceeds_r_hi = *ev.R_witness > ev.r_interval->hi;
  ev.verdict = *ev.R_witness > ev.r_interval->lo;
  if (!ev.verdict) ev.reason = "R witness does not exceed r_lo";
  return ev;
}

}  // namespace

Certificate certify(const ProblemSpec& spec, int n) {
  validate(spec);
  Certificate cert;
  cert.alpha = alpha_of(spec.rho1);
  const TransformedSpec ts = to_y_equation(spec);

  Constants coeffs;
  {
    const Extrema b = extrema(spec.b);
    const Extrema c = extrema(spec.c);
    coeffs.b_min = b.min;
    coeffs.c_min = c.min;
  }
  cert.theorem = dispatch(spec, coeffs);

  std::optional<GreensFunction> green;
  try {
    green = select_green(spec, n);
  } catch (const ResonanceError& e) {
    cert.resonant = true;
    cert.reason = std::string("resonance: ") + e.what();
    return cert;
  }
  cert.green_origin = green->origin == GreensFunction::Origin::ClosedForm ? "closed-form" : "numeric";

  if (green->xi) cert.criteria.push_back(check_closed_form(*green->xi, spec.omega));
  if (spec.a1) cert.criteria.push_back(check_A1(spec.p, ts.l, *spec.a1));
  cert.criteria.push_back(check_A2(spec.p, ts.l));
  cert.criteria.push_back(check_chu(spec.p, ts.l));

  auto holds = [&](Criterion c) {
    for (const auto& v : cert.criteria)
      if (v.criterion == c && v.applicable && v.holds) return true;
    return false;
  };
  if (green->xi) {
    cert.positivity_source = holds(Criterion::ClosedForm) ? PositivitySource::ClosedForm : PositivitySource::None;
  } else if (holds(Criterion::A1)) {
    cert.positivity_source = PositivitySource::A1;
  } else if (holds(Criterion::A2)) {
    cert.positivity_source = PositivitySource::A2;
  } else if (holds(Criterion::Chu)) {
    cert.positivity_source = PositivitySource::Chu;
  } else if (green->positive) {
    cert.positivity_source = PositivitySource::Grid;
  }
  cert.green_positive = cert.positivity_source != PositivitySource::None;

  const Constants k = gather_constants(spec, *green);
  cert.primary = evaluate(spec, k, cert.theorem, "measured");
  if (spec.dmax_reported) cert.reported = evaluate(spec, with_d_max(k, *spec.dmax_reported), cert.theorem, "reported");

  if (!cert.green_positive) {
    cert.reason = "positivity of the Green's function is not established";
  } else if (!cert.primary.verdict) {
    cert.reason = cert.primary.reason;
  }
  cert.verdict = cert.green_positive && cert.primary.verdict;
  return cert;
}

}  // namespace posorbit
