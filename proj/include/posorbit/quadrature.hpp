#pragma once

#include <functional>
#include <span>

namespace posorbit::quad {

/// Adaptive Gauss-Kronrod (7, 15) quadrature of f over [a, b]. The interval is
/// first cut into `initial_panels` equal panels; panels are halved until
/// |K15 - G7| <= abs_tol * (panel length) / (b - a).
double adaptive_gk15(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     int initial_panels = 16);

/// Composite quadrature of uniformly spaced samples with spacing h:
/// Simpson's rule, with a 3/8 panel when the interval count is odd.
double sampled(std::span<const double> values, double h);

}  // namespace posorbit::quad
