#pragma once

/**
 * @file hypotheses.hpp
 * @brief Existence certificates for positive periodic solutions.
 *
 * Given a positive Green's function of the linear part, the checkable
 * inequalities H1..H4 bound an interval of admissible inner radii r, and a
 * growth inequality yields an outer radius R. Which inequalities apply is
 * decided by the sign of rho1 - rho2 and, when the exponents coincide, the
 * sign of b_min + c_min.
 */

#include <optional>
#include <string>
#include <vector>

#include "posorbit/greens.hpp"
#include "posorbit/problem.hpp"

namespace posorbit {

struct Constants {
  double g_max = 0.0;
  double g_min = 0.0;
  double d_max = 0.0;
  double sigma = 0.0;
  double delta = 0.0;
  double b_min = 0.0;
  double b_max = 0.0;
  double c_min = 0.0;
  double c_max = 0.0;
  double e_min = 0.0;
  double e_max = 0.0;
  double b_plus_mean = 0.0;
};

/// Coefficient extrema of the spec combined with the kernel constants.
Constants gather_constants(const ProblemSpec& spec, const GreensFunction& green);

/// Same constants with max |dG/dt| replaced and sigma, delta recomputed.
Constants with_d_max(Constants c, double d_max);

/// Admissible r: lo <= r <= hi (lo < r when lo_strict).
struct RBounds {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_strict = false;
  bool ok = false;
};

struct H2Result {
  double value = 0.0;
  bool ok = false;
};

RBounds check_H1(const ProblemSpec& spec, const Constants& k);
H2Result check_H2(const ProblemSpec& spec, const Constants& k);
RBounds check_H3(const ProblemSpec& spec, const Constants& k);
RBounds check_H4(const ProblemSpec& spec, const Constants& k);

enum class Theorem { T3_1, T3_2, T3_3_I, T3_3_II, None };

std::string to_string(Theorem t);

/// Selected from sign(rho1 - rho2) and, for equal exponents, sign(b_min + c_min).
Theorem dispatch(const ProblemSpec& spec, const Constants& k);

/// Left side of the growth inequality lhs(R) <= R for the given theorem.
double growth_lhs(const ProblemSpec& spec, const Constants& k, Theorem theorem, double R);

/// Smallest R > r_lo, to 6 significant digits, with growth_lhs(R) <= R:
/// geometric bracketing over 2 r_lo 2^k then bisection. None when no R up
/// to 1e12 qualifies.
std::optional<double> find_R(const ProblemSpec& spec, const Constants& k, Theorem theorem, double r_lo);

/// One run of the hypothesis checks under a particular constant set.
struct Evaluation {
  std::string label;
  Constants constants;
  std::optional<RBounds> h1;
  H2Result h2;
  std::optional<RBounds> h3;
  std::optional<RBounds> h4;
  std::optional<RBounds> r_interval;
  std::optional<double> R_witness;
  bool R_exceeds_r_hi = false;
  bool verdict = false;
  std::string reason;
};

enum class PositivitySource { ClosedForm, A1, A2, Chu, Grid, None };

std::string to_string(PositivitySource s);

struct Certificate {
  Theorem theorem = Theorem::None;
  double alpha = 0.0;
  PositivitySource positivity_source = PositivitySource::None;
  bool green_positive = false;
  std::string green_origin;
  std::vector<CriterionVerdict> criteria;
  Evaluation primary;                 ///< measured constants; carries the headline verdict
  std::optional<Evaluation> reported; ///< with the externally reported max |dG/dt|
  bool verdict = false;
  bool resonant = false;  ///< the linear part has no Green's function
  std::string reason;
};

/// Kernel used for certification: the closed form when p = 0 and q/alpha is
/// a positive constant, otherwise the numeric construction.
GreensFunction select_green(const ProblemSpec& spec, int n = 200);

Certificate certify(const ProblemSpec& spec, int n = 200);

}  // namespace posorbit
