#include "posorbit/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace posorbit::quad {

namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
  double kronrod;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[static_cast<std::size_t>(i)];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[static_cast<std::size_t>(i)] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[static_cast<std::size_t>(i / 2)] * pair;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

double refine(const std::function<double(double)>& f, double a, double b, double tol_density, int depth) {
  const PanelResult r = gk15(f, a, b);
  if (r.error <= tol_density * (b - a) || depth >= 40) return r.kronrod;
  const double mid = 0.5 * (a + b);
  return refine(f, a, mid, tol_density, depth + 1) + refine(f, mid, b, tol_density, depth + 1);
}

}  // namespace

double adaptive_gk15(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     int initial_panels) {
  if (b < a) return -adaptive_gk15(f, b, a, abs_tol, initial_panels);
  if (b == a) return 0.0;
  if (initial_panels < 1) initial_panels = 1;
  const double width = (b - a) / initial_panels;
  const double tol_density = abs_tol / (b - a);
  double total = 0.0;
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == initial_panels) ? b : a + (i + 1) * width;
    total += refine(f, lo, hi, tol_density, 0);
  }
  return total;
}

double sampled(std::span<const double> v, double h) {
  const std::size_t n = v.size();
  if (n < 2) return 0.0;
  const std::size_t intervals = n - 1;
  if (intervals == 1) return 0.5 * h * (v[0] + v[1]);
  if (intervals == 2) return h / 3.0 * (v[0] + 4.0 * v[1] + v[2]);
  std::size_t simpson_end = intervals;
  double total = 0.0;
  if (intervals % 2 == 1) {
    simpson_end = intervals - 3;
    total += 3.0 * h / 8.0 * (v[simpson_end] + 3.0 * v[simpson_end + 1] + 3.0 * v[simpson_end + 2] + v[simpson_end + 3]);
  }
  if (simpson_end == 0) return total;
  double s = v[0] + v[simpson_end];
  for (std::size_t i = 1; i < simpson_end; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * v[i];
  return total + h / 3.0 * s;
}

}  // namespace posorbit::quad
