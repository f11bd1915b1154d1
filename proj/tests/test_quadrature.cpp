#include "doctest.h"

#include <cmath>

#include "mplcp/quadrature.hpp"

using namespace mplcp;

TEST_CASE("polynomial and exponential integrals") {
  CHECK(integrate_adaptive([](double x) { return x; }, 0, 1) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // Truncated exponential: tail cut chosen so the remainder is below abs_tol.
  const double lambda = 2.0;
  const QuadSpec spec;
  const double cut = std::log(1.0 / spec.abs_tol) / lambda;
  const double v = integrate_adaptive(
      [&](double x) { return lambda * std::exp(-lambda * x); }, 0, cut, spec);
  CHECK(std::fabs(v - 1.0) < 10 * spec.abs_tol);
}

TEST_CASE("degenerate interval and bad bounds") {
  CHECK(integrate_adaptive([](double x) { return x; }, 2, 2) == 0.0);
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return x; }, 1, 0),
                  InvalidArgument);
}

TEST_CASE("kinked integrand split at breakpoints matches antiderivative") {
  // f(x) = |x - c| + |x - d| has closed-form pieces.
  const double c = 0.3, d = 0.7;
  auto f = [&](double x) { return std::fabs(x - c) + std::fabs(x - d); };
  auto exact_abs = [](double a, double b, double k) {
    // integral of |x - k| on [a, b]
    auto anti = [&](double x) { return 0.5 * (x - k) * std::fabs(x - k); };
    return anti(b) - anti(a);
  };
  const double expected = exact_abs(0, 1, c) + exact_abs(0, 1, d);
  const double got = integrate_adaptive_split(f, 0, 1, {c, d});
  CHECK(got == doctest::Approx(expected).epsilon(1e-10));

  // breakpoints outside the interval are ignored
  CHECK(integrate_adaptive_split([](double x) { return x; }, 0, 1, {-3, 9}) ==
        doctest::Approx(0.5));
}

TEST_CASE("budget exhaustion raises QuadratureFailure") {
  QuadSpec tight;
  tight.abs_tol = 1e-16;
  tight.rel_tol = 1e-16;
  tight.max_panels = 8;
  auto nasty = [](double x) { return std::sqrt(std::fabs(x - 0.123456)); };
  CHECK_THROWS_AS(integrate_adaptive(nasty, 0, 1, tight), QuadratureFailure);
}

TEST_CASE("non-finite integrand is reported") {
  auto bad = [](double x) { return 1.0 / (x - 0.5); };
  CHECK_THROWS_AS(integrate_adaptive(bad, 0.4999999999, 0.5000000001),
                  QuadratureFailure);
}

TEST_CASE("two-dimensional integrals") {
  // Triangle 0 <= y <= x <= 1 of f = 1 has area 1/2.
  const double tri = integrate_2d([](double, double) { return 1.0; }, 0, 1,
                                  [](double) { return 0.0; },
                                  [](double x) { return x; });
  CHECK(tri == doctest::Approx(0.5).epsilon(1e-10));

  // Separable smooth integrand with a known value.
  const double sq = integrate_2d(
      [](double x, double y) { return std::exp(x + y); }, 0, 1,
      [](double) { return 0.0; }, [](double) { return 1.0; });
  const double e1 = std::exp(1.0) - 1.0;
  CHECK(sq == doctest::Approx(e1 * e1).epsilon(1e-10));

  // Empty inner range contributes nothing.
  const double empty = integrate_2d([](double, double) { return 1.0; }, 0, 1,
                                    [](double) { return 1.0; },
                                    [](double) { return 0.0; });
  CHECK(empty == 0.0);
}
