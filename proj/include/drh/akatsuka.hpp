#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "drh/primes.hpp"

namespace drh {

struct CriticalPoint {
  double tau0 = 0.0;
  unsigned m = 0;  // declared order of vanishing of zeta at s0; never computed here

  [[nodiscard]] std::complex<double> s0() const { return {0.5, tau0}; }
};

// The product and the normalizer themselves overflow double long before
// x = 10^8 at tau0 = 0, so samples carry logarithms. The log of the product is
// the sum of principal logs of the factors (never reduced mod 2 pi).
struct RatioSample {
  double x = 0.0;
  std::complex<double> log_finite_product;
  std::complex<double> log_normalizer;
  std::complex<double> ratio;  // (log x)^m * product / normalizer

  [[nodiscard]] std::complex<double> finite_product() const { return std::exp(log_finite_product); }
  [[nodiscard]] std::complex<double> normalizer() const { return std::exp(log_normalizer); }
};

struct RatioRun {
  CriticalPoint point;
  std::vector<RatioSample> samples;
  // max |ratio| / min |ratio| over the trailing half of the grid.
  double oscillation = 0.0;
};

// log zeta_x(s0) = -sum_{p <= x} log(1 - p^{-s0}); Re(s0) must be 1/2.
std::complex<double> log_finite_zeta(std::uint64_t x, std::complex<double> s0,
                                     const SieveOptions& opts = {});
std::complex<double> finite_zeta(std::uint64_t x, std::complex<double> s0,
                                 const SieveOptions& opts = {});

// lim_{eps -> 0} (int_{1+eps}^x du / (u^{s0} log u) - log(1/eps))
//   = log log x + F((1 - s0) log x),   F(z) = sum_{k>=1} z^k / (k k!).
std::complex<double> log_normalizer(double x, std::complex<double> s0);
std::complex<double> normalizer(double x, std::complex<double> s0);

// The same limit by adaptive quadrature at one eps, before the limit.
std::complex<double> normalizer_exponent_quadrature(double x, std::complex<double> s0, double eps);

struct NormalizerCheck {
  std::complex<double> closed_form;
  std::complex<double> quadrature;  // eps = 1e-4 and 1e-6, extrapolated linearly to 0
  double difference = 0.0;
};

// Throws ValidationError if the two exponents differ by more than tolerance
// (an absolute exponent error is a relative error of the normalizer).
NormalizerCheck validate_normalizer(double x, std::complex<double> s0, double tolerance = 1e-6);

RatioRun akatsuka_ratio(std::span<const double> grid, const CriticalPoint& point,
                        const SieveOptions& opts = {});

// (x, (psi(x) - x) / (sqrt(x) log x))
std::vector<std::pair<double, double>> psi_error_diag(std::span<const double> grid,
                                                      const SieveOptions& opts = {});

}  // namespace drh
