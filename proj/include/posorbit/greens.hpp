#pragma once

/**
 * @file greens.hpp
 * @brief Green's function of the periodic problem
 *        u'' + p u' + l u = h,  u(0) = u(omega), u'(0) = u'(omega),
 *        its positivity criteria and the constants derived from it.
 *
 * Grids are row-major over (t_i, s_j) with t_i = s_i = i * omega / n,
 * i = 0..n. On the diagonal i == j the s <= t branch is stored, so Gt there
 * is the one-sided derivative from t = s+; the t = s- value is kept
 * separately in `gt_diag_minus`.
 */

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "posorbit/coeff.hpp"

namespace posorbit {

/// The homogeneous periodic problem has a nontrivial solution, so the
/// Green's function does not exist.
class ResonanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GreensFunction {
  enum class Origin { ClosedForm, Numeric };

  Origin origin = Origin::Numeric;
  double omega = 0.0;
  int n = 0;
  std::optional<double> xi;  ///< set for the constant-coefficient closed form
  std::vector<double> G;
  std::vector<double> Gt;
  std::vector<double> gt_diag_minus;

  double g_max = 0.0;  ///< G* = max G
  double g_min = 0.0;  ///< G_* = min G
  double d_max = 0.0;  ///< max |dG/dt|
  double sigma = 0.0;
  double delta = 0.0;
  bool positive = false;

  double step() const { return omega / n; }
  double node(int i) const { return omega * i / n; }
  double g(int i, int j) const { return G[static_cast<std::size_t>(i) * (n + 1) + j]; }
  double gt(int i, int j) const { return Gt[static_cast<std::size_t>(i) * (n + 1) + j]; }
};

/// sigma and delta from the three measured constants.
std::pair<double, double> sigma_delta(double g_max, double g_min, double d_max);

/// Two-branch cosine kernel for p = 0, l = xi^2. Throws ResonanceError when
/// sin(xi * omega / 2) vanishes.
GreensFunction closed_form_constant(double xi, double omega, int n = 200);

/// Kernel from the fundamental matrix of the homogeneous system. Throws
/// ResonanceError when the monodromy matrix has an eigenvalue within 1e-8 of 1.
GreensFunction numeric_periodic_green(const PeriodicCoeff& p, const PeriodicCoeff& l, double omega, int n = 200);

/// Samples of a function and its derivative on the kernel's t-grid.
struct SampledFunction {
  double omega = 0.0;
  std::vector<double> value;
  std::vector<double> deriv;

  int n() const { return static_cast<int>(value.size()) - 1; }
  double step() const { return omega / n(); }
};

/// u(t_i) = int G(t_i, s) h(s) ds and u'(t_i) from Gt, by composite
/// Simpson quadrature over the periodic window s in [t_i, t_i + omega].
SampledFunction solve_linear(const GreensFunction& green, const PeriodicCoeff& h);
SampledFunction solve_linear(const GreensFunction& green, std::span<const double> h_samples);

/// Residuals of the three defining properties of a kernel.
struct GreenDiagnostics {
  double homogeneous_residual = 0.0;  ///< max |G_tt + p G_t + l G| off the diagonal
  double periodicity_mismatch = 0.0;  ///< max over interior s of |G(0,s)-G(w,s)|, |Gt(0,s)-Gt(w,s)|
  double jump_error = 0.0;            ///< max |jump - 1| from third-order one-sided differences of G
};

GreenDiagnostics diagnose(const GreensFunction& green, const PeriodicCoeff& p, const PeriodicCoeff& l);

/// Jump of dG/dt across the diagonal at column j, from finite differences of G.
double diagonal_jump(const GreensFunction& green, int j);

enum class Criterion { A1, A2, Chu, ClosedForm };

std::string to_string(Criterion c);

struct CriterionVerdict {
  Criterion criterion = Criterion::ClosedForm;
  bool applicable = true;
  bool holds = false;
  std::vector<std::pair<std::string, double>> quantities;
  std::string notes;

  std::optional<double> quantity(std::string_view key) const;
};

/// (int p)^2 >= 4 w^2 exp((1/w) int ln l). Not applicable unless l > 0.
CriterionVerdict check_A2(const PeriodicCoeff& p, const PeriodicCoeff& l);

/// Verifies a caller-supplied factorization a1 + a2 = p, a1' + a1 a2 = l.
CriterionVerdict check_A1(const PeriodicCoeff& p, const PeriodicCoeff& l, const PeriodicCoeff& a1);

/// Antimaximum-principle criterion, with the auxiliary function
/// varsigma_1(p)(t) = varsigma(p)(w) * int_0^t p + int_t^w varsigma(p).
CriterionVerdict check_chu(const PeriodicCoeff& p, const PeriodicCoeff& l);

/// xi < pi / omega.
CriterionVerdict check_closed_form(double xi, double omega);

}  // namespace posorbit
