#include "posorbit/coeff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "posorbit/quadrature.hpp"

namespace posorbit {

namespace {

constexpr int kPeriodicityPoints = 256;
constexpr int kScanPoints = 4096;
constexpr int kRefineCandidates = 8;

double scale_of(const PeriodicCoeff& c) {
  const double w = c.period();
  double m = 0.0;
  for (int i = 0; i < 64; ++i) m = std::max(m, std::abs(c(w * i / 64.0)));
  return m;
}

// Minimizes g on [a, b].
double golden_section(const std::function<double(double)>& g, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = g(x1);
  double f2 = g(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = g(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

double wrap(double t, double w) {
  double r = std::fmod(t, w);
  if (r < 0) r += w;
  return r;
}

// Returns (t, sign * f(t)) minimizing sign * f.
std::pair<double, double> refine_extremum(const PeriodicCoeff& c, const std::vector<double>& samples, double sign) {
  const double w = c.period();
  const double h = w / kScanPoints;
  std::vector<int> order(kScanPoints);
  for (int i = 0; i < kScanPoints; ++i) order[static_cast<std::size_t>(i)] = i;
  std::partial_sort(order.begin(), order.begin() + kRefineCandidates, order.end(), [&](int a, int b) {
    return sign * samples[static_cast<std::size_t>(a)] < sign * samples[static_cast<std::size_t>(b)];
  });
  const int best = order.front();
  double best_t = best * h;
  double best_v = sign * samples[static_cast<std::size_t>(best)];
  auto g = [&](double t) { return sign * c(t); };
  for (int k = 0; k < kRefineCandidates; ++k) {
    const double center = order[static_cast<std::size_t>(k)] * h;
    const double t = golden_section(g, center - h, center + h);
    const double v = g(t);
    if (v < best_v) {
      best_v = v;
      best_t = wrap(t, w);
    }
  }
  return {best_t, best_v};
}

}  // namespace

PeriodicCoeff::PeriodicCoeff(Expr expr, double period) : expr_(std::move(expr)), period_(period) {
  if (!(period > 0.0) || !std::isfinite(period)) throw std::invalid_argument("period must be positive and finite");
  for (int i = 0; i < kPeriodicityPoints; ++i) {
    const double t = period * i / kPeriodicityPoints;
    const double f0 = expr_.eval(t);
    const double f1 = expr_.eval(t + period);
    if (std::abs(f1 - f0) > 1e-10 * (1.0 + std::abs(f0))) {
      throw std::invalid_argument("expression " + expr_.to_string() + " is not periodic with period " +
                                  std::to_string(period));
    }
  }
}

bool PeriodicCoeff::is_zero() const {
  const auto v = expr_.constant_value();
  return v && *v == 0.0;
}

PeriodicCoeff make_coeff(std::string_view text, double period) { return PeriodicCoeff(parse_expr(text), period); }

Extrema extrema(const PeriodicCoeff& c) {
  if (const auto v = c.expr().constant_value()) return {*v, *v, 0.0, 0.0};
  const double w = c.period();
  std::vector<double> samples(kScanPoints);
  for (int i = 0; i < kScanPoints; ++i) samples[static_cast<std::size_t>(i)] = c(w * i / kScanPoints);
  const auto [t_min, v_min] = refine_extremum(c, samples, 1.0);
  const auto [t_max, v_max] = refine_extremum(c, samples, -1.0);
  return {v_min, -v_max, t_min, t_max};
}

double integrate(const PeriodicCoeff& c, double t0, double t1) {
  if (t1 == t0) return 0.0;
  const double len = std::abs(t1 - t0);
  const double tol = 1e-12 * len * std::max(scale_of(c), 1e-300);
  const int panels = std::max(1, static_cast<int>(std::ceil(16.0 * len / c.period())));
  return quad::adaptive_gk15([&](double t) { return c(t); }, t0, t1, tol, panels);
}

double mean(const PeriodicCoeff& c) { return integrate(c, 0.0, c.period()) / c.period(); }

double mean_positive_part(const PeriodicCoeff& c) {
  const double w = c.period();
  const double h = w / kScanPoints;
  std::vector<double> roots{0.0};
  double prev = c(0.0);
  for (int i = 1; i <= kScanPoints; ++i) {
    const double t = i * h;
    const double cur = c(t);
    if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
      double lo = t - h;
      double hi = t;
      double flo = prev;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * w; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = c(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  roots.push_back(w);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < roots.size(); ++k) {
    const double a = roots[k];
    const double b = roots[k + 1];
    if (b <= a) continue;
    if (c(0.5 * (a + b)) > 0.0) total += integrate(c, a, b);
  }
  return total / w;
}

}  // namespace posorbit
