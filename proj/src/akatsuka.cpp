#include "drh/akatsuka.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drh/errors.hpp"
#include "drh/special.hpp"

namespace drh {

namespace {

void check_critical(std::complex<double> s0) {
  if (s0.real() != 0.5) throw DomainError("s0 must lie on the critical line Re(s) = 1/2");
}

std::array<double, 2> log_factor(std::uint64_t p, std::complex<double> s0) {
  const double lp = std::log(static_cast<double>(p));
  const std::complex<double> z = std::exp(-s0 * lp);
  const std::complex<double> v = -std::log(1.0 - z);
  return {v.real(), v.imag()};
}

}  // namespace

std::complex<double> log_finite_zeta(std::uint64_t x, std::complex<double> s0,
                                     const SieveOptions& opts) {
  check_critical(s0);
  if (x < 2) throw ConfigError("finite_zeta: x must be >= 2");
  const auto s = prime_sum<2>(x, [&](std::uint64_t p) { return log_factor(p, s0); }, opts);
  return {s[0], s[1]};
}

std::complex<double> finite_zeta(std::uint64_t x, std::complex<double> s0,
                                 const SieveOptions& opts) {
  return std::exp(log_finite_zeta(x, s0, opts));
}

std::complex<double> log_normalizer(double x, std::complex<double> s0) {
  if (!(x > 1.0)) throw DomainError("normalizer: x must exceed 1");
  const double L = std::log(x);
  return std::log(L) + exp_integral_entire((1.0 - s0) * L);
}

std::complex<double> normalizer(double x, std::complex<double> s0) {
  return std::exp(log_normalizer(x, s0));
}

std::complex<double> normalizer_exponent_quadrature(double x, std::complex<double> s0, double eps) {
  if (!(x > 1.0 + eps) || !(eps > 0.0)) throw DomainError("quadrature needs 0 < eps < x - 1");
  const auto f = [s0](double u) { return std::exp(-s0 * std::log(u)) / std::log(u); };
  const auto r = integrate_adaptive(f, 1.0 + eps, x, 1e-11, 1e-13);
  return r.value + std::log(eps);
}

NormalizerCheck validate_normalizer(double x, std::complex<double> s0, double tolerance) {
  constexpr double e1 = 1e-4;
  constexpr double e2 = 1e-6;
  const auto q1 = normalizer_exponent_quadrature(x, s0, e1);
  const auto q2 = normalizer_exponent_quadrature(x, s0, e2);
  NormalizerCheck out;
  out.closed_form = log_normalizer(x, s0);
  out.quadrature = (q2 * e1 - q1 * e2) / (e1 - e2);
  out.difference = std::abs(out.closed_form - out.quadrature);
  if (!(out.difference <= tolerance)) {
    throw ValidationError("normalizer closed form and quadrature differ by " +
                          std::to_string(out.difference) + " at x = " + std::to_string(x));
  }
  return out;
}

RatioRun akatsuka_ratio(std::span<const double> grid, const CriticalPoint& point,
                        const SieveOptions& opts) {
  const auto s0 = point.s0();
  std::vector<double> xs(grid.begin(), grid.end());
  std::sort(xs.begin(), xs.end());
  std::vector<std::uint64_t> points;
  for (const double x : xs) {
    if (!(x >= 2.0)) throw ConfigError("akatsuka_ratio: grid points must be >= 2");
    points.push_back(static_cast<std::uint64_t>(x));
  }
  const auto sums = prime_prefix_sums<2>(points, [&](std::uint64_t p) { return log_factor(p, s0); },
                                         opts);
  RatioRun run;
  run.point = point;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    RatioSample s;
    s.x = xs[i];
    s.log_finite_product = {sums[i][0], sums[i][1]};
    s.log_normalizer = log_normalizer(xs[i], s0);
    const double scale = point.m * std::log(std::log(xs[i]));
    s.ratio = std::exp(s.log_finite_product - s.log_normalizer + scale);
    run.samples.push_back(s);
  }
  if (!run.samples.empty()) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = run.samples.size() / 2; i < run.samples.size(); ++i) {
      const double a = std::abs(run.samples[i].ratio);
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
    run.oscillation = hi / lo;
  }
  return run;
}

std::vector<std::pair<double, double>> psi_error_diag(std::span<const double> grid,
                                                      const SieveOptions& opts) {
  std::vector<std::pair<double, double>> out;
  for (const double x : grid) {
    if (!(x >= 2.0)) throw DomainError("psi_error_diag: grid points must be >= 2");
    const double psi = chebyshev_psi(static_cast<std::uint64_t>(x), std::nullopt, opts);
    out.emplace_back(x, (psi - x) / (std::sqrt(x) * std::log(x)));
  }
  return out;
}

}  // namespace drh
