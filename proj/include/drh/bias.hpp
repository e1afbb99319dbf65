#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "drh/primes.hpp"
#include "drh/satake.hpp"
#include "drh/summation.hpp"
#include "drh/tau.hpp"

namespace drh {

// Piecewise-constant function of real x: values[i] holds on
// [breakpoints[i], breakpoints[i+1]), and on [breakpoints.back(), x_max].
// Zero below the first breakpoint.
struct StepSeries {
  std::vector<double> breakpoints;
  std::vector<double> values;
  double x_max = 0.0;

  [[nodiscard]] double at(double x) const;
  [[nodiscard]] std::size_t size() const { return breakpoints.size(); }
};

struct Crossing {
  double x = 0.0;
  bool zero_touch = false;  // the series reached exactly 0 here
};

// Leading zeros are skipped; a zero reached from a nonzero value is a touch.
class CrossingTracker {
 public:
  void step(double x, double value);
  [[nodiscard]] const std::vector<Crossing>& crossings() const& { return out_; }
  [[nodiscard]] std::vector<Crossing> take() && { return std::move(out_); }

 private:
  int last_ = 0;
  bool at_zero_ = false;
  std::vector<Crossing> out_;
};

struct DensityReport {
  double X = 0.0;
  double lower = 2.0;
  int sign = 1;                  // measured set is {sign * f > 0}
  double natural_density = 0.0;  // positive_measure / (X - lower)
  double log_density = 0.0;      // (1 / log X) * int dt / t over the set
  double positive_measure = 0.0;
  double log_measure = 0.0;
  std::vector<Crossing> crossings;
};

// Streams (breakpoint, value) pairs in ascending order and integrates the
// indicator of {sign * value > 0} over [lower, X]. Also records crossings.
class SignSetAccumulator {
 public:
  SignSetAccumulator(double lower, int sign);
  void step(double x, double value);
  [[nodiscard]] DensityReport finish(double X);

 private:
  double lower_;
  int sign_;
  double last_x_;
  double last_value_ = 0.0;
  CompensatedSum measure_;
  CompensatedSum log_measure_;
  CrossingTracker crossings_;

  void close_interval(double upto);
};

// sum_{p <= x, p = a mod q} p^{-s}
double weighted_pi(std::uint64_t x, std::uint64_t q, std::uint64_t a, double s,
                   const SieveOptions& opts = {});

// D_s(x) = pi_s(x; 4, 3) - pi_s(x; 4, 1), breakpoints at the odd primes.
StepSeries char_bias_series(std::uint64_t X, double s, const SieveOptions& opts = {});

// Density of {sign * D_s > 0} on [lower, X] without materializing the series.
DensityReport char_bias_density(std::uint64_t X, double s, double lower, int sign,
                                const SieveOptions& opts = {});

// T(x) = sum_{p <= x} tau(p) / p^6, the same summands and order as I(x) of the
// Delta decomposition.
StepSeries tau_bias_series(const UnitaryFamily& delta, std::uint64_t X,
                           const SieveOptions& opts = {});

// (x, (log x / sqrt x) S(x)) with S(x) = sum_{p <= x} lambda(p).
std::vector<std::pair<double, double>> sarnak_statistic(const UnitaryFamily& delta,
                                                        std::span<const double> grid,
                                                        const SieveOptions& opts = {});

DensityReport densities(const StepSeries& series, double X, double lower = 2.0, int sign = 1);

// Strict sign changes relative to the last nonzero value, plus zero touches.
std::vector<Crossing> crossings(const StepSeries& series);

// (x, f(x) / ((sign / 2) log log x)); every x must be at least 16.
std::vector<std::pair<double, double>> loglog_ratio(const StepSeries& series,
                                                    std::span<const double> grid, int sign);

}  // namespace drh
