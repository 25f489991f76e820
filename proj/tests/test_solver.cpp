#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <string>

#include "posorbit/hypotheses.hpp"
#include "posorbit/problem_file.hpp"
#include "posorbit/solver.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace posorbit;
using oracle::kOmega;

namespace {

ProblemSpec spec_with(std::map<std::string, std::string> overrides) {
  std::map<std::string, std::string> keys{{"omega", "2*pi/3"}, {"p", "0"},    {"q", "1/40"},
                                          {"b", "1 + 2*cos(3*t)"}, {"c", "exp(2*sin(3*t))"},
                                          {"e", "10 + cos(3*t)"},  {"rho1", "3/2"}, {"rho2", "13/10"}};
  for (auto& [k, v] : overrides) keys[k] = v;
  std::string text;
  for (auto& [k, v] : keys) text += k + " = " + v + "\n";
  return parse_problem(text, "case").spec;
}

ProblemSpec example(const char* id) { return parse_problem(*bundled_problem(id)).spec; }

// x'' + x = 1/x + 3 with the equilibrium (3 + sqrt 13)/2.
ProblemSpec constant_problem() {
  return spec_with({{"q", "1"}, {"b", "0"}, {"c", "1"}, {"e", "3"}, {"rho1", "1"}, {"rho2", "1"}});
}
const double kEquilibrium = (3 + std::sqrt(13.0)) / 2;

SampledFunction constant_samples(double value, int n) {
  SampledFunction f;
  f.omega = kOmega;
  f.value.assign(static_cast<std::size_t>(n) + 1, value);
  f.deriv.assign(static_cast<std::size_t>(n) + 1, 0.0);
  return f;
}

}  // namespace

TEST_CASE("vector field at a sample state") {
  const ProblemSpec spec = example("4.1");
  const auto d = rhs(spec, 0.0, {0.0, 400.0, 0.0}, default_guard(spec));
  const double want = -10.0 + 3.0 / std::pow(400.0, 1.5) + 1.0 / std::pow(400.0, 1.3) + 11.0;
  CHECK(d[0] == 0.0);
  CHECK(d[1] == doctest::Approx(want).epsilon(1e-14));

  const ProblemSpec k = constant_problem();
  CHECK(std::abs(rhs(k, 0.3, {0.3, kEquilibrium, 0.0}, 1e-6)[1]) <= 1e-14);
  CHECK_THROWS_AS(rhs(spec, 0.0, {0.0, 0.0, 1.0}, default_guard(spec)), SingularityError);
  CHECK_THROWS_AS(rhs(spec, 0.0, {0.0, -1.0, 1.0}, default_guard(spec)), SingularityError);
}

TEST_CASE("guard scales with the natural amplitude") {
  const ProblemSpec spec = example("4.1");
  CHECK(natural_amplitude(spec) == doctest::Approx(400.0).epsilon(1e-12));
  CHECK(default_guard(spec) == doctest::Approx(4e-4).epsilon(1e-12));
}

TEST_CASE("zero span yields the initial state only") {
  const ProblemSpec spec = example("4.1");
  const Trajectory tr = integrate(spec, {1.0, 400.0, 2.0}, 1.0, 16, 1e-12, default_guard(spec));
  REQUIRE(tr.size() == 1);
  CHECK(tr.x[0] == 400.0);
  CHECK(tr.v[0] == 2.0);
}

TEST_CASE("linear problem matches its exact periodic solution") {
  // x'' + x/16 = 10 + cos 3t has x = 160 + cos(3t) / (1/16 - 9).
  ProblemSpec spec = spec_with({{"q", "1/16"}, {"e", "10 + cos(3*t)"}});
  spec.b = make_coeff("0", kOmega);
  spec.c = make_coeff("0", kOmega);
  const double k = 1.0 / (1.0 / 16 - 9);
  const Trajectory tr = integrate(spec, {0.0, 160 + k, 0.0}, 3 * kOmega, 300, 1e-12, 1e-6);
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    worst = std::max(worst, std::abs(tr.x[i] - (160 + k * std::cos(3 * tr.t[i]))));
    worst = std::max(worst, std::abs(tr.v[i] + 3 * k * std::sin(3 * tr.t[i])));
  }
  CHECK(worst <= 1e-8 * 160);

  const Orbit o = find_periodic(spec);
  CHECK(o.initial.x == doctest::Approx(160 + k).epsilon(1e-9));
  CHECK(std::abs(o.initial.v) <= 1e-7);
}

TEST_CASE("energy is conserved for autonomous forcing") {
  const ProblemSpec spec = constant_problem();
  auto energy = [](double x, double v) { return 0.5 * v * v + 0.5 * x * x - std::log(x) - 3 * x; };
  const State s0{0.0, kEquilibrium + 0.5, 0.0};
  const Trajectory tr = integrate(spec, s0, 10 * kOmega, 500, 1e-12, 1e-6);
  const double h0 = energy(s0.x, s0.v);
  double drift = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) drift = std::max(drift, std::abs(energy(tr.x[i], tr.v[i]) - h0));
  CHECK(drift <= 1e-9 * std::abs(h0));
}

TEST_CASE("period map fixes the equilibrium") {
  const ProblemSpec spec = constant_problem();
  const State p = poincare(spec, {0.0, kEquilibrium, 0.0}, 1e-12, 1e-6);
  CHECK(p.t == doctest::Approx(kOmega));
  CHECK(std::abs(p.x - kEquilibrium) <= 1e-10);
  CHECK(std::abs(p.v) <= 1e-10);

  const Orbit o = find_periodic(spec);
  CHECK(std::abs(o.initial.x - kEquilibrium) <= 1e-8);
  CHECK(o.periodicity_residual <= 1e-8);
}

TEST_CASE("example orbits") {
  struct Row {
    const char* id;
    double x0;
  };
  for (const Row& r : {Row{"4.1", 399.931341}, Row{"4.2", 399.894124}, Row{"4.3", 399.904955}}) {
    INFO(r.id);
    const ProblemSpec spec = example(r.id);
    const Orbit o = find_periodic(spec);
    CHECK(o.periodicity_residual <= 1e-8);
    CHECK(std::abs(o.initial.x - 400.0) <= 0.5);
    CHECK(o.initial.x == doctest::Approx(r.x0).epsilon(1e-6));
    CHECK(o.min_x > 0.0);
    CHECK(o.ode_residual <= 1e-4 * 11.0);
    CHECK(o.samples.size() == 2049);
    CHECK(o.samples.x.front() == doctest::Approx(o.samples.x.back()).epsilon(1e-10));

    // The orbit is a fixed point of the integral operator.
    const GreensFunction g = select_green(spec);
    const TransformedSpec ts = to_y_equation(spec);
    const SampledFunction y = y_samples(spec, o.initial, g.n);
    CHECK(fixed_point_defect(g, ts, y) <= 1e-3);

    // Sampled norm on the kernel grid cannot exceed the fine-grid norm by much.
    const double coarse = c1_norm(y);
    CHECK(coarse <= o.norm_y * (1 + 1e-6));
    CHECK(coarse >= 0.99 * o.norm_y);
  }
}

TEST_CASE("a start below the guard blows up") {
  const ProblemSpec spec = example("4.1");
  CHECK_THROWS(find_periodic(spec, State{0.0, 1e-9, 0.0}));
}

TEST_CASE("no periodic orbit without restoring force") {
  // x'' = b/x^rho1 + c/x^rho2 + e with everything positive accelerates forever.
  const ProblemSpec spec = spec_with({{"q", "0"}, {"b", "2 + cos(3*t)"}});
  CHECK_THROWS_AS(find_periodic(spec), NoConvergence);
}

TEST_CASE("operator maps constants to the equilibrium relation") {
  const ProblemSpec spec = constant_problem();
  const GreensFunction g = select_green(spec);
  const TransformedSpec ts = to_y_equation(spec);
  // alpha = 1/2, l = 2: T(Y) = (2 + 6 sqrt Y) / 2.
  const SampledFunction ty = apply_T(g, ts, constant_samples(4.0, g.n));
  for (std::size_t i = 0; i < ty.value.size(); ++i) {
    CHECK(ty.value[i] == doctest::Approx(7.0).epsilon(1e-7));
    CHECK(std::abs(ty.deriv[i]) <= 1e-6);
  }
  CHECK(fixed_point_defect(g, ts, constant_samples(kEquilibrium * kEquilibrium, g.n)) <= 1e-7);
}

TEST_CASE("each forcing term enters the operator linearly") {
  ProblemSpec a = constant_problem();
  ProblemSpec b = a;
  b.b = make_coeff("1.5", kOmega);
  const GreensFunction g = select_green(a);
  const SampledFunction y = constant_samples(4.0, g.n);
  const SampledFunction ta = apply_T(g, to_y_equation(a), y);
  const SampledFunction tb = apply_T(g, to_y_equation(b), y);
  // Extra b / alpha = 3 integrated against a kernel of mass 1 / l = 1/2.
  for (std::size_t i = 0; i < ta.value.size(); ++i) CHECK(tb.value[i] - ta.value[i] == doctest::Approx(1.5).epsilon(1e-7));
}

TEST_CASE("cone membership") {
  const int n = 200;
  CHECK(cone_check(constant_samples(5.0, n), 0.9, 0.1).in_cone);
  CHECK(cone_check(constant_samples(5.0, n), 0.9, 0.1).min_margin == doctest::Approx(0.5));

  SampledFunction wavy = constant_samples(5.0, n);
  for (int i = 0; i <= n; ++i) {
    const double t = kOmega * i / n;
    wavy.value[static_cast<std::size_t>(i)] = 5.0 + std::sin(3 * t);
    wavy.deriv[static_cast<std::size_t>(i)] = 3 * std::cos(3 * t);
  }
  const ConeCheck c = cone_check(wavy, 0.5, 0.1);
  CHECK_FALSE(c.in_cone);
  CHECK(c.slope_margin < 0.0);
  CHECK(c1_norm(wavy) == doctest::Approx(9.0).epsilon(1e-3));
}

TEST_CASE("property: period map commutes with time shifts") {
  const PropertyResult r = poincare_shift();
  INFO("worst " << r.worst);
  CHECK(r.ok());
}
