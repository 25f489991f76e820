#include "posorbit/greens.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "posorbit/ode.hpp"
#include "posorbit/quadrature.hpp"

namespace posorbit {

namespace {

using Mat2 = std::array<std::array<double, 2>, 2>;

Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return r;
}

Mat2 inverse(const Mat2& a) {
  const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return Mat2{{{a[1][1] / det, -a[0][1] / det}, {-a[1][0] / det, a[0][0] / det}}};
}

// Value of sign * grid at an extremum near (i, j), polished by a quadratic
// model of the 3x3 neighbourhood. Neighbourhoods that straddle the diagonal
// or touch the boundary are left at the grid value.
double polish(const std::vector<double>& grid, int n, int i, int j, double sign) {
  auto v = [&](int a, int b) { return sign * grid[static_cast<std::size_t>(a) * (n + 1) + b]; };
  const double f0 = v(i, j);
  if (i < 1 || j < 1 || i > n - 1 || j > n - 1) return f0;
  const bool lower = (i - 1) >= (j + 1);
  const bool upper = (i + 1) < (j - 1);
  if (!lower && !upper) return f0;
  const double fx = 0.5 * (v(i + 1, j) - v(i - 1, j));
  const double fy = 0.5 * (v(i, j + 1) - v(i, j - 1));
  const double fxx = v(i + 1, j) - 2.0 * f0 + v(i - 1, j);
  const double fyy = v(i, j + 1) - 2.0 * f0 + v(i, j - 1);
  const double fxy = 0.25 * (v(i + 1, j + 1) - v(i + 1, j - 1) - v(i - 1, j + 1) + v(i - 1, j - 1));
  double best = f0;
  const double det = fxx * fyy - fxy * fxy;
  if (fxx < 0.0 && det > 1e-10 * (fxx * fxx + fyy * fyy)) {
    const double dx = -(fyy * fx - fxy * fy) / det;
    const double dy = -(fxx * fy - fxy * fx) / det;
    if (std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0) best = std::max(best, f0 + 0.5 * (fx * dx + fy * dy));
  } else {
    if (fxx < 0.0 && std::abs(fx / fxx) <= 1.0) best = std::max(best, f0 - 0.5 * fx * fx / fxx);
    if (fyy < 0.0 && std::abs(fy / fyy) <= 1.0) best = std::max(best, f0 - 0.5 * fy * fy / fyy);
  }
  return best;
}

struct GridArg {
  int i = 0;
  int j = 0;
  double value = 0.0;
};

GridArg arg_extreme(const std::vector<double>& grid, int n, double sign) {
  GridArg best{0, 0, sign * grid[0]};
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double v = sign * grid[static_cast<std::size_t>(i) * (n + 1) + j];
      if (v > best.value) best = {i, j, v};
    }
  }
  return best;
}

void fill_constants(GreensFunction& g) {
  const GridArg mx = arg_extreme(g.G, g.n, 1.0);
  const GridArg mn = arg_extreme(g.G, g.n, -1.0);
  g.g_max = polish(g.G, g.n, mx.i, mx.j, 1.0);
  g.g_min = -polish(g.G, g.n, mn.i, mn.j, -1.0);
  auto [sigma, delta] = sigma_delta(g.g_max, g.g_min, g.d_max);
  g.sigma = sigma;
  g.delta = delta;
}

double numeric_d_max(const GreensFunction& g) {
  const GridArg hi = arg_extreme(g.Gt, g.n, 1.0);
  const GridArg lo = arg_extreme(g.Gt, g.n, -1.0);
  double d = std::max(polish(g.Gt, g.n, hi.i, hi.j, 1.0), polish(g.Gt, g.n, lo.i, lo.j, -1.0));
  for (double v : g.gt_diag_minus) d = std::max(d, std::abs(v));
  return d;
}

}  // namespace

std::pair<double, double> sigma_delta(double g_max, double g_min, double d_max) {
  return {g_min / (g_max + d_max), d_max / g_min};
}

GreensFunction closed_form_constant(double xi, double omega, int n) {
  if (!(xi > 0.0) || !(omega > 0.0)) throw std::invalid_argument("closed form needs xi > 0 and omega > 0");
  if (n < 2) throw std::invalid_argument("grid needs at least 2 intervals");
  const double half_phase = 0.5 * xi * omega;
  const double s_half = std::sin(half_phase);
  if (std::abs(s_half) < 1e-14) {
    throw ResonanceError("sin(xi*omega/2) vanishes: the homogeneous periodic problem is resonant");
  }
  const double denom = 2.0 * xi * s_half;
  GreensFunction g;
  g.origin = GreensFunction::Origin::ClosedForm;
  g.omega = omega;
  g.n = n;
  g.xi = xi;
  const std::size_t side = static_cast<std::size_t>(n) + 1;
  g.G.resize(side * side);
  g.Gt.resize(side * side);
  g.gt_diag_minus.resize(side);
  for (int i = 0; i <= n; ++i) {
    const double t = g.node(i);
    for (int j = 0; j <= n; ++j) {
      const double s = g.node(j);
      const double shift = (j <= i) ? -0.5 * omega : 0.5 * omega;
      const double arg = xi * (t - s + shift);
      g.G[static_cast<std::size_t>(i) * side + j] = std::cos(arg) / denom;
      g.Gt[static_cast<std::size_t>(i) * side + j] = -xi * std::sin(arg) / denom;
    }
    g.gt_diag_minus[static_cast<std::size_t>(i)] = -xi * std::sin(half_phase) / denom;
  }
  // Both branches sweep arguments in [-xi*w/2, xi*w/2].
  const double max_sin = half_phase >= std::numbers::pi / 2 ? 1.0 : std::abs(s_half);
  g.d_max = xi * max_sin / std::abs(denom);
  fill_constants(g);
  g.positive = xi < std::numbers::pi / omega && g.g_min > 0.0;
  return g;
}

GreensFunction numeric_periodic_green(const PeriodicCoeff& p, const PeriodicCoeff& l, double omega, int n) {
  if (n < 2) throw std::invalid_argument("grid needs at least 2 intervals");
  GreensFunction g;
  g.origin = GreensFunction::Origin::Numeric;
  g.omega = omega;
  g.n = n;
  std::vector<double> times(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) times[static_cast<std::size_t>(i)] = g.node(i);

  // Fundamental matrix, state (phi00, phi01, phi10, phi11).
  auto rhs = [&](double t, const ode::Vec<4>& y) {
    const double pt = p(t);
    const double lt = l(t);
    return ode::Vec<4>{y[2], y[3], -lt * y[0] - pt * y[2], -lt * y[1] - pt * y[3]};
  };
  ode::Options opt;
  opt.rtol = 1e-13;
  opt.atol = 1e-14;
  const auto run = ode::integrate<4>(rhs, 0.0, ode::Vec<4>{1.0, 0.0, 0.0, 1.0}, times, opt);
  std::vector<Mat2> phi(run.samples.size());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const auto& y = run.samples[k];
    phi[k] = Mat2{{{y[0], y[1]}, {y[2], y[3]}}};
  }
  const Mat2& m = phi.back();
  const double tr = m[0][0] + m[1][1];
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr - 4.0 * det, 0.0));
  const std::complex<double> lam1 = 0.5 * (tr + disc);
  const std::complex<double> lam2 = 0.5 * (tr - disc);
  const double gap = std::min(std::abs(lam1 - 1.0), std::abs(lam2 - 1.0));
  if (gap < 1e-8) {
    throw ResonanceError("monodromy matrix has an eigenvalue within " + std::to_string(gap) +
                         " of 1: no unique periodic solution");
  }
  const Mat2 i_minus_m{{{1.0 - m[0][0], -m[0][1]}, {-m[1][0], 1.0 - m[1][1]}}};
  const Mat2 b = mul(inverse(i_minus_m), m);

  const std::size_t side = static_cast<std::size_t>(n) + 1;
  // w(s) = phi(s)^{-1} e2 and b w(s).
  std::vector<std::array<double, 2>> w(side), bw(side);
  for (std::size_t j = 0; j < side; ++j) {
    const Mat2 inv = inverse(phi[j]);
    w[j] = {inv[0][1], inv[1][1]};
    bw[j] = {b[0][0] * w[j][0] + b[0][1] * w[j][1], b[1][0] * w[j][0] + b[1][1] * w[j][1]};
  }
  g.G.resize(side * side);
  g.Gt.resize(side * side);
  g.gt_diag_minus.resize(side);
  for (std::size_t i = 0; i < side; ++i) {
    const Mat2& f = phi[i];
    for (std::size_t j = 0; j < side; ++j) {
      double v0 = bw[j][0];
      double v1 = bw[j][1];
      if (j <= i) {
        v0 += w[j][0];
        v1 += w[j][1];
      }
      g.G[i * side + j] = f[0][0] * v0 + f[0][1] * v1;
      g.Gt[i * side + j] = f[1][0] * v0 + f[1][1] * v1;
    }
    g.gt_diag_minus[i] = f[1][0] * bw[i][0] + f[1][1] * bw[i][1];
  }
  g.d_max = numeric_d_max(g);
  fill_constants(g);
  const bool grid_positive = std::all_of(g.G.begin(), g.G.end(), [](double v) { return v > 0.0; });
  g.positive = grid_positive && g.g_min > 0.0;
  return g;
}

SampledFunction solve_linear(const GreensFunction& green, std::span<const double> h) {
  const int n = green.n;
  if (h.size() != static_cast<std::size_t>(n) + 1) throw std::invalid_argument("forcing samples do not match the grid");
  const double step = green.step();
  SampledFunction u;
  u.omega = green.omega;
  u.value.resize(h.size());
  u.deriv.resize(h.size());
  // G(t, .) is omega-periodic in s, so over the window [t, t + omega] the
  // integrand is smooth and the kink sits only at the two ends.
  std::vector<double> val, der;
  for (int i = 0; i <= n; ++i) {
    val.clear();
    der.clear();
    for (int j = i; j <= n; ++j) {
      const double gt = (j == i) ? green.gt_diag_minus[static_cast<std::size_t>(i)] : green.gt(i, j);
      val.push_back(green.g(i, j) * h[static_cast<std::size_t>(j)]);
      der.push_back(gt * h[static_cast<std::size_t>(j)]);
    }
    for (int j = 1; j <= i; ++j) {
      val.push_back(green.g(i, j) * h[static_cast<std::size_t>(j)]);
      der.push_back(green.gt(i, j) * h[static_cast<std::size_t>(j)]);
    }
    u.value[static_cast<std::size_t>(i)] = quad::sampled(val, step);
    u.deriv[static_cast<std::size_t>(i)] = quad::sampled(der, step);
  }
  return u;
}

SampledFunction solve_linear(const GreensFunction& green, const PeriodicCoeff& h) {
  std::vector<double> samples(static_cast<std::size_t>(green.n) + 1);
  for (int i = 0; i <= green.n; ++i) samples[static_cast<std::size_t>(i)] = h(green.node(i));
  return solve_linear(green, samples);
}

double diagonal_jump(const GreensFunction& green, int j) {
  const int n = green.n;
  if (j < 3 || j > n - 3) throw std::out_of_range("jump needs three grid points on each side of the diagonal");
  const double h = green.step();
  auto g = [&](int i) { return green.g(i, j); };
  const double right = (-11.0 * g(j) + 18.0 * g(j + 1) - 9.0 * g(j + 2) + 2.0 * g(j + 3)) / (6.0 * h);
  const double left = (11.0 * g(j) - 18.0 * g(j - 1) + 9.0 * g(j - 2) - 2.0 * g(j - 3)) / (6.0 * h);
  return right - left;
}

GreenDiagnostics diagnose(const GreensFunction& green, const PeriodicCoeff& p, const PeriodicCoeff& l) {
  GreenDiagnostics d;
  const int n = green.n;
  const double h = green.step();
  for (int j = 0; j <= n; ++j) {
    for (int i = 2; i < n - 1; ++i) {
      // Central stencil must not cross the diagonal.
      if (i - 2 <= j && j <= i + 2) continue;
      const double t = green.node(i);
      const double gtt =
          (-green.gt(i + 2, j) + 8.0 * green.gt(i + 1, j) - 8.0 * green.gt(i - 1, j) + green.gt(i - 2, j)) / (12.0 * h);
      const double r = gtt + p(t) * green.gt(i, j) + l(t) * green.g(i, j);
      d.homogeneous_residual = std::max(d.homogeneous_residual, std::abs(r));
    }
  }
  for (int j = 1; j < n; ++j) {
    d.periodicity_mismatch = std::max(d.periodicity_mismatch, std::abs(green.g(0, j) - green.g(n, j)));
    d.periodicity_mismatch = std::max(d.periodicity_mismatch, std::abs(green.gt(0, j) - green.gt(n, j)));
  }
  for (int j = 3; j <= n - 3; ++j) d.jump_error = std::max(d.jump_error, std::abs(diagonal_jump(green, j) - 1.0));
  return d;
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::A1:
      return "A1";
    case Criterion::A2:
      return "A2";
    case Criterion::Chu:
      return "CHU";
    case Criterion::ClosedForm:
      return "CLOSED_FORM";
  }
  return "?";
}

std::optional<double> CriterionVerdict::quantity(std::string_view key) const {
  for (const auto& [k, v] : quantities)
    if (k == key) return v;
  return std::nullopt;
}

CriterionVerdict check_A2(const PeriodicCoeff& p, const PeriodicCoeff& l) {
  CriterionVerdict v;
  v.criterion = Criterion::A2;
  const double w = l.period();
  const Extrema le = extrema(l);
  v.quantities.emplace_back("l_min", le.min);
  if (!(le.min > 0.0)) {
    v.applicable = false;
    v.holds = false;
    v.notes = "l(t) must be positive for ln l to exist";
    return v;
  }
  const double int_p = integrate(p, 0.0, w);
  const double int_ln_l = quad::adaptive_gk15([&](double t) { return std::log(l(t)); }, 0.0, w, 1e-13 * w, 16);
  const double lhs = int_p * int_p;
  const double rhs = 4.0 * w * w * std::exp(int_ln_l / w);
  v.quantities.emplace_back("lhs", lhs);
  v.quantities.emplace_back("rhs", rhs);
  v.holds = lhs >= rhs;
  return v;
}

CriterionVerdict check_A1(const PeriodicCoeff& p, const PeriodicCoeff& l, const PeriodicCoeff& a1) {
  CriterionVerdict v;
  v.criterion = Criterion::A1;
  const double w = p.period();
  const PeriodicCoeff a2(p.expr() - a1.expr(), w);
  const Expr da1 = a1.expr().derivative();
  double residual = 0.0;
  constexpr int kPoints = 4096;
  for (int k = 0; k < kPoints; ++k) {
    const double t = w * k / kPoints;
    residual = std::max(residual, std::abs(da1.eval(t) + a1(t) * a2(t) - l(t)));
  }
  const double int_a1 = integrate(a1, 0.0, w);
  const double int_a2 = integrate(a2, 0.0, w);
  v.quantities.emplace_back("residual", residual);
  v.quantities.emplace_back("int_a1", int_a1);
  v.quantities.emplace_back("int_a2", int_a2);
  v.holds = residual <= 1e-8 && int_a1 > 0.0 && int_a2 > 0.0;
  v.notes = "a2 = p - a1 = " + a2.expr().to_string();
  return v;
}

namespace {

// Running integral of uniformly spaced samples, third-order accurate per
// cell: each cell uses the quadratic through its two ends and one neighbour.
std::vector<double> cumulative(const std::vector<double>& f, double h) {
  std::vector<double> c(f.size(), 0.0);
  for (std::size_t k = 0; k + 1 < f.size(); ++k) {
    double cell;
    if (k == 0) {
      cell = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    } else {
      cell = h / 12.0 * (-f[k - 1] + 8.0 * f[k] + 5.0 * f[k + 1]);
    }
    c[k + 1] = c[k] + cell;
  }
  return c;
}

}  // namespace

CriterionVerdict check_chu(const PeriodicCoeff& p, const PeriodicCoeff& l) {
  CriterionVerdict v;
  v.criterion = Criterion::Chu;
  const double w = p.period();
  constexpr std::size_t kCells = 8192;  // per period
  constexpr std::size_t kWindows = 512;
  const double h = w / static_cast<double>(kCells);
  // Samples over [0, 2w] so every window [t, t + w] with t in [0, w] is covered.
  const std::size_t points = 2 * kCells + 1;
  std::vector<double> p_s(points), l_s(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double t = h * static_cast<double>(k);
    p_s[k] = p(t);
    l_s[k] = l(t);
  }
  const std::vector<double> P = cumulative(p_s, h);
  std::vector<double> sig_p(points), sig_mp(points), lpos_sig_p(points);
  for (std::size_t k = 0; k < points; ++k) {
    sig_p[k] = std::exp(P[k]);
    sig_mp[k] = std::exp(-P[k]);
    lpos_sig_p[k] = std::max(l_s[k], 0.0) * sig_p[k];
  }
  const std::vector<double> cum_sig_mp = cumulative(sig_mp, h);
  const std::vector<double> cum_lpos = cumulative(lpos_sig_p, h);

  // varsigma_1(-p)(t) = varsigma(-p)(w) * int_0^t (-p) + int_t^w varsigma(-p).
  const double sig_mp_w = sig_mp[kCells];
  std::vector<double> integrand(kCells + 1);
  for (std::size_t k = 0; k <= kCells; ++k) {
    const double varsigma1 = sig_mp_w * (-P[k]) + (cum_sig_mp[kCells] - cum_sig_mp[k]);
    integrand[k] = l_s[k] * sig_p[k] * varsigma1;
  }
  const double weighted_integral = quad::sampled(integrand, h);

  double window_sup = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < kWindows; ++k) {
    const std::size_t idx = k * (kCells / kWindows);
    const double a = cum_sig_mp[idx + kCells] - cum_sig_mp[idx];
    const double b = cum_lpos[idx + kCells] - cum_lpos[idx];
    window_sup = std::max(window_sup, a * b);
  }
  const Extrema le = extrema(l);
  const bool l_nonzero = le.min != 0.0 || le.max != 0.0;
  v.quantities.emplace_back("weighted_integral", weighted_integral);
  v.quantities.emplace_back("window_sup", window_sup);
  v.quantities.emplace_back("l_nonzero", l_nonzero ? 1.0 : 0.0);
  v.holds = weighted_integral >= 0.0 && window_sup <= 4.0 && l_nonzero;
  v.notes =
      "varsigma_1 evaluated as printed, varsigma(p)(w) * int_0^t p(s) ds + int_t^w varsigma(p)(s) ds; "
      "the first term plausibly should integrate varsigma(p) rather than p";
  return v;
}

CriterionVerdict check_closed_form(double xi, double omega) {
  CriterionVerdict v;
  v.criterion = Criterion::ClosedForm;
  v.quantities.emplace_back("xi", xi);
  v.quantities.emplace_back("pi_over_omega", std::numbers::pi / omega);
  v.holds = xi > 0.0 && xi < std::numbers::pi / omega;
  return v;
}

}  // namespace posorbit
