#pragma once

// Independent reference computations and random-input generators for the
// test suites. Nothing here calls into the library's numerics.

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kOmega = 2.0 * kPi / 3.0;

/// Two-branch cosine kernel of u'' + xi^2 u = h with periodic conditions.
inline double green(double xi, double omega, double t, double s) {
  const double shift = (s <= t) ? -omega / 2.0 : omega / 2.0;
  return std::cos(xi * (t - s + shift)) / (2.0 * xi * std::sin(xi * omega / 2.0));
}

inline double green_t(double xi, double omega, double t, double s) {
  const double shift = (s <= t) ? -omega / 2.0 : omega / 2.0;
  return -std::sin(xi * (t - s + shift)) / (2.0 * std::sin(xi * omega / 2.0));
}

/// Max |dG/dt| by brute-force scan of an m x m grid, both diagonal branches.
inline double green_t_scan(double xi, double omega, int m) {
  double best = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double t = omega * i / m;
    for (int j = 0; j <= m; ++j) {
      const double s = omega * j / m;
      best = std::max(best, std::abs(green_t(xi, omega, t, s)));
      if (i == j) {
        const double arg = xi * (omega / 2.0);
        best = std::max(best, std::abs(std::sin(arg) / (2.0 * std::sin(xi * omega / 2.0))));
      }
    }
  }
  return best;
}

/// Composite Simpson with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

/// Bisection on a bracketing interval.
inline double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int k = 0; k < 200; ++k) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

using State2 = std::array<double, 2>;
using Field2 = std::function<State2(double, const State2&)>;

/// Classical fixed-step RK4.
inline State2 rk4(const Field2& f, double t0, State2 y, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  double t = t0;
  auto axpy = [](const State2& a, double s, const State2& b) { return State2{a[0] + s * b[0], a[1] + s * b[1]}; };
  for (int i = 0; i < steps; ++i) {
    const State2 k1 = f(t, y);
    const State2 k2 = f(t + h / 2, axpy(y, h / 2, k1));
    const State2 k3 = f(t + h / 2, axpy(y, h / 2, k2));
    const State2 k4 = f(t + h, axpy(y, h, k3));
    for (int c = 0; c < 2; ++c) y[c] += h / 6.0 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
    t += h;
  }
  return y;
}

/// Periodic solution of u'' + p u' + l u = h by superposition of RK4 flows:
/// (u(0), u'(0)) solves (I - M) s = particular(w) with M the monodromy.
inline State2 periodic_linear_start(const std::function<double(double)>& p, const std::function<double(double)>& l,
                                    const std::function<double(double)>& h, double omega, int steps = 20000) {
  auto homog = [&](double t, const State2& y) { return State2{y[1], -p(t) * y[1] - l(t) * y[0]}; };
  auto forced = [&](double t, const State2& y) { return State2{y[1], -p(t) * y[1] - l(t) * y[0] + h(t)}; };
  const State2 c0 = rk4(homog, 0.0, {1.0, 0.0}, omega, steps);
  const State2 c1 = rk4(homog, 0.0, {0.0, 1.0}, omega, steps);
  const State2 part = rk4(forced, 0.0, {0.0, 0.0}, omega, steps);
  // (I - M) s = part
  const double a = 1.0 - c0[0], b = -c1[0], c = -c0[1], d = 1.0 - c1[1];
  const double det = a * d - b * c;
  return State2{(d * part[0] - b * part[1]) / det, (-c * part[0] + a * part[1]) / det};
}

}  // namespace oracle

namespace gen {

/// A random smooth omega-periodic function as expression text plus an
/// independently coded evaluator.
struct RandomCoeff {
  std::string text;
  std::function<double(double)> f;
};

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return v < 0 ? "(" + std::string(buf) + ")" : std::string(buf);
}

/// Sum of 1..4 terms drawn from constants, A sin(k w0 t + phi),
/// A cos(k w0 t + phi), A exp(B sin(k w0 t)) and products of two
/// trigonometric factors, where w0 = 2 pi / omega.
inline RandomCoeff random_coeff(std::mt19937_64& rng, double omega = oracle::kOmega) {
  std::uniform_real_distribution<double> amp(-2.0, 2.0);
  std::uniform_real_distribution<double> phase(-3.0, 3.0);
  std::uniform_int_distribution<int> kind(0, 4);
  std::uniform_int_distribution<int> harmonic(1, 3);
  std::uniform_int_distribution<int> terms(1, 4);
  const double w0 = 2.0 * oracle::kPi / omega;

  RandomCoeff out;
  std::vector<std::function<double(double)>> parts;
  const int n = terms(rng);
  for (int i = 0; i < n; ++i) {
    const double A = amp(rng);
    const double k = harmonic(rng) * w0;
    const double ph = phase(rng);
    std::string term;
    std::function<double(double)> g;
    switch (kind(rng)) {
      case 0:
        term = num(A);
        g = [A](double) { return A; };
        break;
      case 1:
        term = num(A) + "*sin(" + num(k) + "*t+" + num(ph) + ")";
        g = [A, k, ph](double t) { return A * std::sin(k * t + ph); };
        break;
      case 2:
        term = num(A) + "*cos(" + num(k) + "*t+" + num(ph) + ")";
        g = [A, k, ph](double t) { return A * std::cos(k * t + ph); };
        break;
      case 3: {
        const double B = 0.5 * amp(rng);
        term = num(A) + "*exp(" + num(B) + "*sin(" + num(k) + "*t))";
        g = [A, B, k](double t) { return A * std::exp(B * std::sin(k * t)); };
        break;
      }
      default: {
        const double k2 = harmonic(rng) * w0;
        term = num(A) + "*sin(" + num(k) + "*t)*cos(" + num(k2) + "*t+" + num(ph) + ")";
        g = [A, k, k2, ph](double t) { return A * std::sin(k * t) * std::cos(k2 * t + ph); };
        break;
      }
    }
    out.text += (i ? " + " : "") + term;
    parts.push_back(g);
  }
  out.f = [parts](double t) {
    double s = 0.0;
    for (const auto& g : parts) s += g(t);
    return s;
  };
  return out;
}

}  // namespace gen
