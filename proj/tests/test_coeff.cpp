#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "posorbit/coeff.hpp"
#include "posorbit/quadrature.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace posorbit;
using oracle::kOmega;
using oracle::kPi;

TEST_CASE("periodicity is enforced on construction") {
  CHECK_NOTHROW(make_coeff("1 + 2*cos(3*t)", kOmega));
  CHECK_THROWS_AS(make_coeff("cos(t)", kOmega), std::invalid_argument);
  CHECK_THROWS_AS(make_coeff("t", kOmega), std::invalid_argument);
  // A coefficient with a shorter period is still omega-periodic.
  CHECK_NOTHROW(make_coeff("sin(6*t)", kOmega));
}

TEST_CASE("property: stored coefficients repeat after one period") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-20, 20);
  for (int i = 0; i < 100; ++i) {
    const PeriodicCoeff c = make_coeff(gen::random_coeff(rng).text, kOmega);
    for (int k = 0; k < 20; ++k) {
      const double t = u(rng);
      CHECK(std::abs(c(t + kOmega) - c(t)) <= 1e-10 * (1 + std::abs(c(t))));
    }
  }
}

TEST_CASE("extrema of the example coefficients") {
  const Extrema b = extrema(make_coeff("1 + 2*cos(3*t)", kOmega));
  CHECK(b.min == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(b.max == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(b.t_min == doctest::Approx(kPi / 3).epsilon(1e-6));

  const Extrema c = extrema(make_coeff("exp(2*sin(3*t))", kOmega));
  CHECK(std::abs(c.min - std::exp(-2.0)) <= 1e-8);
  CHECK(std::abs(c.max - std::exp(2.0)) <= 1e-8);

  const Extrema k = extrema(make_coeff("10", kOmega));
  CHECK(k.min == 10.0);
  CHECK(k.max == 10.0);
}

TEST_CASE("extrema agree with a fine independent scan") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 20; ++i) {
    const auto rc = gen::random_coeff(rng);
    const Extrema ex = extrema(make_coeff(rc.text, kOmega));
    double lo = INFINITY, hi = -INFINITY;
    for (int k = 0; k <= 200000; ++k) {
      const double v = rc.f(kOmega * k / 200000);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    // the scan can only miss extrema, by O(h^2 f'')
    CHECK(ex.min <= lo + 1e-8);
    CHECK(ex.max >= hi - 1e-8);
    CHECK(ex.min >= lo - 1e-6);
    CHECK(ex.max <= hi + 1e-6);
  }
}

TEST_CASE("integrals of the example coefficients") {
  CHECK(std::abs(integrate(make_coeff("cos(3*t)", kOmega), 0, kOmega)) <= 1e-13);
  CHECK(integrate(make_coeff("10 + cos(3*t)", kOmega), 0, kOmega) == doctest::Approx(20 * kPi / 3).epsilon(1e-13));
  const double b_part = integrate(make_coeff("1 + 2*cos(3*t)", kOmega), -2 * kPi / 9, 2 * kPi / 9);
  CHECK(b_part == doctest::Approx(4 * kPi / 9 + 2 * std::sqrt(3.0) / 3).epsilon(1e-13));
  CHECK(integrate(make_coeff("1", kOmega), 1.0, 1.0) == 0.0);
}

TEST_CASE("integrals against an independent Simpson oracle") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-2, 4);
  for (int i = 0; i < 30; ++i) {
    const auto rc = gen::random_coeff(rng);
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const double ref = oracle::simpson(rc.f, a, b, 40000);
    CHECK(integrate(make_coeff(rc.text, kOmega), a, b) == doctest::Approx(ref).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("mean of the positive part") {
  const double bplus = mean_positive_part(make_coeff("1 + 2*cos(3*t)", kOmega));
  CHECK(std::abs(bplus - (2.0 / 3.0 + std::sqrt(3.0) / kPi)) <= 1e-9);
  CHECK(mean_positive_part(make_coeff("-5", kOmega)) == 0.0);
  CHECK(mean_positive_part(make_coeff("7", kOmega)) == doctest::Approx(7.0).epsilon(1e-14));
  // kink exactly at a grid node
  CHECK(std::abs(mean_positive_part(make_coeff("sin(3*t)", kOmega)) - 1.0 / kPi) <= 1e-10);
}

TEST_CASE("property: positive-part mean dominates the clipped mean") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 100; ++i) {
    const auto rc = gen::random_coeff(rng);
    const PeriodicCoeff c = make_coeff(rc.text, kOmega);
    const double m = mean_positive_part(c);
    CHECK(m >= std::max(0.0, mean(c)) - 1e-9);
    if (i < 10) {
      const double ref = oracle::simpson([&](double t) { return std::max(0.0, rc.f(t)); }, 0, kOmega, 200000) / kOmega;
      CHECK(m == doctest::Approx(ref).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("property: quadrature additivity") {
  const PropertyResult r = quadrature_additivity();
  INFO("worst " << r.worst);
  CHECK(r.ok());
}

TEST_CASE("property: extrema bound random evaluations") {
  const PropertyResult r = extrema_bounding();
  INFO("worst " << r.worst);
  CHECK(r.ok());
}

TEST_CASE("adaptive Gauss-Kronrod quadrature") {
  CHECK(quad::adaptive_gk15([](double x) { return std::exp(x); }, 0, 1, 1e-14) ==
        doctest::Approx(std::exp(1.0) - 1).epsilon(1e-14));
  CHECK(quad::adaptive_gk15([](double x) { return std::sqrt(x); }, 0, 1, 1e-12) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(quad::adaptive_gk15([](double) { return 1.0; }, 2, 2, 1e-12) == 0.0);
}

TEST_CASE("sampled quadrature is exact for cubics with even and odd interval counts") {
  auto cubic = [](double x) { return 1 - 2 * x + 3 * x * x - x * x * x; };
  auto exact = [](double b) { return b - b * b + b * b * b - b * b * b * b / 4; };
  for (int intervals : {1, 2, 3, 4, 5, 7, 10, 11}) {
    const double h = 0.3;
    std::vector<double> v;
    for (int i = 0; i <= intervals; ++i) v.push_back(cubic(i * h));
    const double got = quad::sampled(v, h);
    if (intervals == 1) {
      CHECK(got == doctest::Approx(0.5 * h * (v[0] + v[1])));
    } else {
      CHECK(got == doctest::Approx(exact(intervals * h)).epsilon(1e-13));
    }
  }
}
