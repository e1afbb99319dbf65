#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "doctest.h"
#include "drh/errors.hpp"
#include "drh/special.hpp"

using namespace drh;
using cd = std::complex<double>;

TEST_CASE("incomplete gamma: series and continued fraction agree") {
  const double two_pi = 2.0 * std::numbers::pi;
  const double s = regularized_gamma_q_series(6.0, two_pi);
  const double c = regularized_gamma_q_cf(6.0, two_pi);
  CHECK(std::abs(s - c) <= 1e-12);
  CHECK(2.0 * c == doctest::Approx(0.802659527674236872).epsilon(1e-14));

  // Both expansions converge well near x = a + 1.
  const std::pair<double, double> overlap[] = {{0.5, 1.2}, {1.0, 2.0}, {3.0, 2.0}, {3.0, 5.0},
                                               {6.0, 5.0}, {6.0, 9.0}, {6.0, 12.0}};
  for (const auto& [a, x] : overlap) {
    CAPTURE(a);
    CAPTURE(x);
    CHECK(std::abs(regularized_gamma_q_series(a, x) - regularized_gamma_q_cf(a, x)) <= 1e-12);
  }
  // Q(1, x) = e^{-x}
  CHECK(regularized_gamma_q(1.0, 3.0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-14));
  CHECK(regularized_gamma_q(6.0, 0.0) == 1.0);
  CHECK(regularized_gamma_q(6.0, 800.0) == 0.0);
}

TEST_CASE("exponential integrals") {
  CHECK(exp_integral_e1_cf(cd(1.0, 0.0)).real() ==
        doctest::Approx(0.219383934395520274).epsilon(1e-13));
  // F(z) = -gamma - log(-z) - E1(-z), compared where both routes are accurate.
  for (const cd z : {cd(-3.0, 0.0), cd(2.0, 5.0), cd(-4.0, -7.0), cd(6.0, -8.0)}) {
    const cd series = exp_integral_entire_series(z);
    const cd via_e1 = -kEulerGamma - std::log(-z) - exp_integral_e1_cf(-z);
    CAPTURE(z);
    CHECK(std::abs(series - via_e1) <= 1e-11 * std::max(1.0, std::abs(series)));
  }
  // log(L) + F(L/2) at x = 100: L = log 100.
  const double L = std::log(100.0);
  CHECK((std::log(L) + exp_integral_entire(cd(0.5 * L, 0.0))).real() ==
        doctest::Approx(6.28153102044571038633).epsilon(1e-13));
  const double L7 = std::log(1e7);
  CHECK((std::log(L7) + exp_integral_entire(cd(0.5 * L7, 0.0))).real() ==
        doctest::Approx(463.0767376499244527).epsilon(1e-13));
  const double L4 = std::log(1e4);
  const cd big = std::log(L4) + exp_integral_entire(cd(0.5, -30.0) * L4);
  CHECK(big.real() == doctest::Approx(-4.027936705371367186).epsilon(1e-10));
  CHECK(big.imag() == doctest::Approx(-1.228970496276876546).epsilon(1e-10));
  CHECK_THROWS_AS(exp_integral_e1_cf(cd(-1.0, 0.0)), DomainError);
}

TEST_CASE("adaptive quadrature") {
  const auto r = integrate_adaptive([](double t) { return cd(std::exp(t), 0.0); }, 0.0, 1.0, 1e-14);
  CHECK(r.value.real() == doctest::Approx(std::numbers::e - 1.0).epsilon(1e-14));
  CHECK(r.error_estimate <= 1e-13);
  const auto s = integrate_adaptive([](double t) { return cd(1.0 / std::sqrt(t), 0.0); }, 0.0, 4.0,
                                    1e-12, 1e-12);
  CHECK(s.value.real() == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(s.intervals > 1);
  const auto osc = integrate_adaptive([](double t) { return std::exp(cd(0.0, 30.0 * t)); }, 0.0,
                                      2.0, 1e-13);
  const cd exact = (std::exp(cd(0.0, 60.0)) - 1.0) / cd(0.0, 30.0);
  CHECK(std::abs(osc.value - exact) <= 1e-12);
}

TEST_CASE("alternating acceleration and Richardson") {
  const double ln2 = alternating_sum_cvz([](std::size_t k) { return 1.0 / (k + 1.0); }, 30);
  CHECK(ln2 == doctest::Approx(std::numbers::ln2).epsilon(1e-14));
  const double pi4 = alternating_sum_cvz([](std::size_t k) { return 1.0 / (2.0 * k + 1.0); }, 30);
  CHECK(pi4 == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));

  std::vector<double> values;
  for (double h = 0.5; values.size() < 6; h /= 2) values.push_back(3.0 + std::sqrt(h) + 2 * h * std::sqrt(h));
  double err = 1.0;
  const double v = richardson_extrapolate(values, 2.0, [](std::size_t j) { return 0.5 + j; }, &err);
  CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(err <= 1e-10);
}
