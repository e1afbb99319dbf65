#pragma once

#include <complex>
#include <functional>
#include <span>

namespace drh {

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a), a > 0, x >= 0.
// Two independent evaluations: the lower-gamma power series (Q = 1 - P) and
// Legendre's continued fraction via modified Lentz. regularized_gamma_q picks
// the series for x < a + 1 and the fraction otherwise.
double regularized_gamma_q_series(double a, double x);
double regularized_gamma_q_cf(double a, double x);
double regularized_gamma_q(double a, double x);

// Ein-type entire function F(z) = int_0^1 (e^{zt} - 1) / t dt = sum_{k>=1} z^k / (k k!).
std::complex<double> exp_integral_entire_series(std::complex<double> z);
// Exponential integral E1(z) by continued fraction; |arg z| < pi.
std::complex<double> exp_integral_e1_cf(std::complex<double> z);
// F(z) with the evaluation route chosen to avoid cancellation: the power
// series when it loses at most ~4 digits, otherwise
// F(z) = -gamma - log(-z) - E1(-z).
std::complex<double> exp_integral_entire(std::complex<double> z);

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  std::size_t intervals = 0;
};

// Globally adaptive Gauss-Kronrod (7/15) on [a, b]: repeatedly bisects the
// interval with the largest error estimate.
QuadratureResult integrate_adaptive(const std::function<std::complex<double>(double)>& f, double a,
                                    double b, double abs_tol, double rel_tol = 1e-13,
                                    std::size_t max_intervals = 200000);

// sum_{k>=0} (-1)^k a_k by the Cohen-Rodriguez Villegas-Zagier weights at
// depth n. Valid when a_k are moments of a positive measure on [0, 1].
double alternating_sum_cvz(const std::function<double(std::size_t)>& a, std::size_t depth);

// Richardson table for values f(h_j) with h_{j+1} = h_j / ratio whose error
// expands in powers h^{e_0}, h^{e_1}, ... Returns the last diagonal entry and
// writes |diag_n - diag_{n-1}| to *error.
double richardson_extrapolate(std::span<const double> values, double ratio,
                              const std::function<double(std::size_t)>& exponent,
                              double* error = nullptr);

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

}  // namespace drh
