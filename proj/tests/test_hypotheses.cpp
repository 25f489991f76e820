#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <string>

#include "posorbit/hypotheses.hpp"
#include "posorbit/problem_file.hpp"
#include "posorbit/transform.hpp"
#include "support.hpp"

using namespace posorbit;
using oracle::kOmega;
using oracle::kPi;

namespace {

ProblemSpec spec_with(std::map<std::string, std::string> overrides) {
  std::map<std::string, std::string> keys{{"omega", "2*pi/3"},
                                          {"p", "0"},
                                          {"q", "1/40"},
                                          {"b", "1 + 2*cos(3*t)"},
                                          {"c", "exp(2*sin(3*t))"},
                                          {"e", "10 + cos(3*t)"},
                                          {"rho1", "3/2"},
                                          {"rho2", "13/10"}};
  for (auto& [k, v] : overrides) keys[k] = v;
  std::string text;
  for (auto& [k, v] : keys)
    if (!v.empty()) text += k + " = " + v + "\n";
  return parse_problem(text, "case").spec;
}

bool within(double got, double want, double rel) { return std::abs(got - want) <= rel * std::abs(want); }

// Constants of the examples written out from the closed-form kernel with
// xi = 1/4, independently of the library.
struct Paper {
  double g_max, g_min, d_max, sigma, delta;
};

Paper kernel_constants(double d_max) {
  const double xi = 0.25;
  Paper k{};
  k.g_max = oracle::green(xi, kOmega, kOmega / 2, 0.0);
  k.g_min = oracle::green(xi, kOmega, 0.0, 0.0);
  k.d_max = d_max;
  k.sigma = k.g_min / (k.g_max + d_max);
  k.delta = d_max / k.g_min;
  return k;
}

const double kBmin = -1.0, kCmin = std::exp(-2.0), kEmin = 9.0;
const double kAlpha = 0.4;

double oracle_r_lo(const Paper& k, double neg) { return std::pow(-neg / kEmin, 1.0 / (1.0 - kAlpha)) / k.sigma; }

double oracle_h1_hi(const Paper& k, double rho2) {
  const double ec = 1.0 - kAlpha - kAlpha * rho2;
  return std::pow(k.g_min * kCmin * kOmega * std::pow(k.sigma, ec) / kAlpha, 1.0 / (kAlpha * (1.0 + rho2)));
}

double oracle_h3_hi(const Paper& k, double rho2) {
  return std::pow(k.g_min * kCmin * kOmega / kAlpha, 1.0 / (kAlpha * (1.0 + rho2)));
}

double oracle_h2(const Paper& k) {
  return (1.0 - kAlpha) * (k.g_max + k.delta * k.g_min) * k.delta * k.delta * kOmega / k.sigma;
}

}  // namespace

TEST_CASE("alpha from rho1") {
  CHECK(alpha_of(1.5) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(alpha_of(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(alpha_of(0.25) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("kernel oracle reproduces the published constants") {
  const Paper k = kernel_constants(std::sqrt(2 - std::sqrt(3.0)) / 2);
  CHECK(k.g_max == doctest::Approx(7.727407).epsilon(1e-6));
  CHECK(k.g_min == doctest::Approx(7.464102).epsilon(1e-6));
  CHECK(oracle::green_t_scan(0.25, kOmega, 4000) == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(oracle_h2(k) == doctest::Approx(0.01291).epsilon(1e-2));
}

TEST_CASE("first example under measured and reported constants") {
  const ProblemSpec spec = spec_with({{"dmax_reported", "sqrt(2 - sqrt(3))/2"}});
  const Certificate cert = certify(spec);
  REQUIRE(cert.theorem == Theorem::T3_1);
  CHECK(cert.verdict);
  CHECK(cert.green_origin == "closed-form");
  CHECK(cert.positivity_source == PositivitySource::ClosedForm);

  const Paper measured = kernel_constants(0.5);
  REQUIRE(cert.primary.h1);
  CHECK(within(cert.primary.h1->lo, oracle_r_lo(measured, kBmin), 1e-4));
  CHECK(within(cert.primary.h1->hi, oracle_h1_hi(measured, 1.3), 1e-4));
  CHECK(within(cert.primary.h2.value, oracle_h2(measured), 1e-4));
  CHECK(cert.primary.h2.ok);

  REQUIRE(cert.reported);
  const Paper reported = kernel_constants(std::sqrt(2 - std::sqrt(3.0)) / 2);
  REQUIRE(cert.reported->h1);
  CHECK(within(cert.reported->h1->lo, oracle_r_lo(reported, kBmin), 1e-6));
  CHECK(within(cert.reported->h1->hi, oracle_h1_hi(reported, 1.3), 1e-6));
  CHECK(within(cert.reported->h1->lo, 0.02748, 1e-2));
  CHECK(within(cert.reported->h1->hi, 6.0777, 1e-2));
  CHECK(within(cert.reported->h2.value, 0.01291, 1e-2));
  CHECK(cert.reported->verdict);
}

TEST_CASE("second example selects the rho1 < rho2 branch") {
  const ProblemSpec spec = spec_with({{"rho2", "2"}, {"dmax_reported", "sqrt(2 - sqrt(3))/2"}});
  const Certificate cert = certify(spec);
  REQUIRE(cert.theorem == Theorem::T3_2);
  CHECK(cert.verdict);
  REQUIRE(cert.reported);
  REQUIRE(cert.reported->h3);
  const Paper reported = kernel_constants(std::sqrt(2 - std::sqrt(3.0)) / 2);
  CHECK(within(cert.reported->h3->hi, oracle_h3_hi(reported, 2.0), 1e-6));
  CHECK(within(cert.reported->h3->hi, 4.00703, 1e-2));
  CHECK(within(cert.reported->h3->lo, 0.02748, 1e-2));
  REQUIRE(cert.primary.h3);
  CHECK(within(cert.primary.h3->hi, oracle_h3_hi(kernel_constants(0.5), 2.0), 1e-4));
}

TEST_CASE("third example: equal exponents with a negative b_min + c_min") {
  const ProblemSpec spec = spec_with({{"rho2", "3/2"}, {"dmax_reported", "sqrt(2 - sqrt(3))/2"}});
  const Certificate cert = certify(spec);
  REQUIRE(cert.theorem == Theorem::T3_3_II);
  CHECK(cert.verdict);
  REQUIRE(cert.reported);
  REQUIRE(cert.reported->h4);
  const Paper reported = kernel_constants(std::sqrt(2 - std::sqrt(3.0)) / 2);
  const double bplus = 2.0 / 3.0 + std::sqrt(3.0) / kPi;
  CHECK(cert.reported->constants.b_plus_mean == doctest::Approx(bplus).epsilon(1e-9));
  CHECK(within(cert.reported->h4->lo, oracle_r_lo(reported, kBmin + kCmin), 1e-6));
  CHECK(within(cert.reported->h4->hi, reported.g_min * bplus * kOmega / kAlpha, 1e-6));
  CHECK(within(cert.reported->h4->lo, 0.02156, 1e-2));
  CHECK(within(cert.reported->h4->hi, 47.6016, 1e-2));
  CHECK(cert.reported->h4->lo_strict);
}

TEST_CASE("equal exponents with non-negative b_min + c_min") {
  const ProblemSpec spec = spec_with({{"rho2", "3/2"}, {"b", "1 + 0.5*cos(3*t)"}});
  const Certificate cert = certify(spec);
  REQUIRE(cert.theorem == Theorem::T3_3_I);
  REQUIRE(cert.primary.r_interval);
  const Paper measured = kernel_constants(0.5);
  const double hi = std::pow(measured.g_min * kEmin * std::pow(measured.sigma, 1.0 - kAlpha) * kOmega / kAlpha, 1.0 / kAlpha);
  CHECK(cert.primary.r_interval->lo == 0.0);
  CHECK(within(cert.primary.r_interval->hi, hi, 1e-4));
  CHECK(cert.verdict);
}

TEST_CASE("R witness satisfies the growth inequality and half of it does not") {
  for (const char* rho2 : {"13/10", "2", "3/2"}) {
    const ProblemSpec spec = spec_with({{"rho2", rho2}});
    const Certificate cert = certify(spec);
    REQUIRE(cert.primary.R_witness);
    const double R = *cert.primary.R_witness;
    const Constants& k = cert.primary.constants;
    CHECK(growth_lhs(spec, k, cert.theorem, R) <= R);
    CHECK(growth_lhs(spec, k, cert.theorem, 0.5 * R) > 0.5 * R);
    CHECK(growth_lhs(spec, k, cert.theorem, R * (1 - 1e-6)) > R * (1 - 1e-6));
    CHECK(R > cert.primary.r_interval->lo);
  }
}

TEST_CASE("single forcing term gives the closed-form R") {
  const ProblemSpec spec = spec_with({{"rho2", "3/2"}});
  Constants k;
  k.g_max = 7.0;
  k.g_min = 6.0;
  k.sigma = 0.9;
  k.delta = 0.0;
  k.e_max = 11.0;
  const double want = std::pow(k.g_max * k.e_max * kOmega / kAlpha, 1.0 / kAlpha);
  const auto R = find_R(spec, k, Theorem::T3_3_I, 0.0);
  REQUIRE(R);
  CHECK(within(*R, want, 1e-6));
}

TEST_CASE("no R when the linear growth coefficient reaches one") {
  const ProblemSpec spec = spec_with({});
  Constants k;
  k.g_max = 7.0;
  k.g_min = 6.0;
  k.sigma = 0.5;
  k.delta = 10.0;
  k.e_max = 11.0;
  CHECK_FALSE(find_R(spec, k, Theorem::T3_1, 0.03));
  CHECK_FALSE(check_H2(spec, k).ok);
}

TEST_CASE("property: dispatch is total and follows the signs") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.1, 3.0), s(-2.0, 2.0);
  ProblemSpec spec = spec_with({});
  for (int i = 0; i < 200; ++i) {
    spec.rho1 = u(rng);
    spec.rho2 = (i % 4 == 0) ? spec.rho1 : u(rng);
    Constants k;
    k.b_min = s(rng);
    k.c_min = std::abs(s(rng));
    const Theorem t = dispatch(spec, k);
    CHECK(t != Theorem::None);
    if (spec.rho1 == spec.rho2) {
      CHECK(t == (k.b_min + k.c_min >= 0 ? Theorem::T3_3_I : Theorem::T3_3_II));
    } else {
      CHECK(t == (spec.rho1 > spec.rho2 ? Theorem::T3_1 : Theorem::T3_2));
    }
  }
}

TEST_CASE("property: lower radius does not grow with e_min") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.5, 20.0);
  const ProblemSpec spec = spec_with({});
  Constants k;
  k.g_max = 7.727407;
  k.g_min = 7.464102;
  k.sigma = 0.9346;
  k.b_min = -1.0;
  k.c_min = 0.1353;
  k.b_plus_mean = 1.218;
  for (int i = 0; i < 100; ++i) {
    double e1 = u(rng), e2 = u(rng);
    if (e1 > e2) std::swap(e1, e2);
    Constants a = k, b = k;
    a.e_min = e1;
    b.e_min = e2;
    CHECK(check_H1(spec, b).lo <= check_H1(spec, a).lo);
    CHECK(check_H3(spec, b).lo <= check_H3(spec, a).lo);
    CHECK(check_H4(spec, b).lo <= check_H4(spec, a).lo);
  }
}

TEST_CASE("non-negative b makes the lower radius vacuous") {
  const ProblemSpec spec = spec_with({{"b", "2 + cos(3*t)"}});
  Constants k;
  k.g_min = 7.0;
  k.sigma = 0.9;
  k.b_min = 1.0;
  k.c_min = 0.1;
  k.e_min = 9.0;
  CHECK(check_H1(spec, k).lo == 0.0);
  CHECK(check_H3(spec, k).lo == 0.0);
}

TEST_CASE("damped linear part uses the numeric kernel") {
  const ProblemSpec spec = spec_with({{"p", "0.1"}});
  const Certificate cert = certify(spec);
  CHECK(cert.green_origin == "numeric");
  CHECK(cert.theorem == Theorem::T3_1);
  CHECK(cert.green_positive);
}

TEST_CASE("resonant linear part is reported, not certified") {
  // q / alpha = 9 puts xi * omega / 2 at pi.
  const Certificate cert = certify(spec_with({{"q", "18/5"}}));
  CHECK(cert.resonant);
  CHECK_FALSE(cert.verdict);
}

TEST_CASE("large q loses positivity of the kernel") {
  // xi = 2: cos(xi * omega / 2) < 0 somewhere on the diagonal band.
  const Certificate cert = certify(spec_with({{"q", "8/5"}}));
  CHECK_FALSE(cert.resonant);
  CHECK_FALSE(cert.green_positive);
  CHECK_FALSE(cert.verdict);
}
