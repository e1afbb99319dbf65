#include "drh/bias.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drh/errors.hpp"

namespace drh {

namespace {

int strict_sign(double v) { return (v > 0.0) - (v < 0.0); }

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw ConfigError("sign must be +1 or -1");
}

// Jump of D_s at an odd prime p.
double bias_jump(std::uint64_t p, double s) {
  if (p == 2) return 0.0;
  const double w = s == 0.0 ? 1.0 : std::pow(static_cast<double>(p), -s);
  return p % 4 == 3 ? w : -w;
}

void check_exponent(double s) {
  if (!(s >= 0.0)) throw ConfigError("weight exponent s must be >= 0");
}

}  // namespace

void CrossingTracker::step(double x, double value) {
  const int s = strict_sign(value);
  if (s == 0) {
    if (last_ != 0 && !at_zero_) out_.push_back({x, true});
    at_zero_ = true;
    return;
  }
  at_zero_ = false;
  if (last_ != 0 && s != last_) out_.push_back({x, false});
  last_ = s;
}

double StepSeries::at(double x) const {
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  if (it == breakpoints.begin()) return 0.0;
  return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

SignSetAccumulator::SignSetAccumulator(double lower, int sign)
    : lower_(lower), sign_(sign), last_x_(lower) {
  check_sign(sign);
}

void SignSetAccumulator::close_interval(double upto) {
  const double a = std::max(last_x_, lower_);
  if (upto > a && sign_ * last_value_ > 0.0) {
    measure_.add(upto - a);
    log_measure_.add(std::log(upto / a));
  }
}

void SignSetAccumulator::step(double x, double value) {
  if (x < last_x_ && x >= lower_) throw ConfigError("SignSetAccumulator: breakpoints must ascend");
  if (x > lower_) {
    close_interval(x);
    last_x_ = x;
  }
  last_value_ = value;
  crossings_.step(x, value);
}

DensityReport SignSetAccumulator::finish(double X) {
  if (!(X > lower_)) throw DomainError("density window needs X > lower");
  close_interval(X);
  last_x_ = X;
  DensityReport r;
  r.X = X;
  r.lower = lower_;
  r.sign = sign_;
  r.positive_measure = measure_.value();
  r.log_measure = log_measure_.value();
  r.natural_density = r.positive_measure / (X - lower_);
  r.log_density = r.log_measure / std::log(X);
  r.crossings = crossings_.crossings();
  return r;
}

double weighted_pi(std::uint64_t x, std::uint64_t q, std::uint64_t a, double s,
                   const SieveOptions& opts) {
  if (q == 0) throw ConfigError("weighted_pi: q must be >= 1");
  check_exponent(s);
  const std::uint64_t r = a % q;
  return prime_sum<1>(x, [&](std::uint64_t p) {
    if (p % q != r) return std::array<double, 1>{0.0};
    return std::array<double, 1>{s == 0.0 ? 1.0 : std::pow(static_cast<double>(p), -s)};
  }, opts)[0];
}

StepSeries char_bias_series(std::uint64_t X, double s, const SieveOptions& opts) {
  check_exponent(s);
  StepSeries out;
  out.x_max = static_cast<double>(X);
  if (X < 3) return out;
  CompensatedSum acc;
  for_each_prime_segment(3, X, opts, [&](std::span<const std::uint64_t> ps) {
    for (const auto p : ps) {
      acc.add(bias_jump(p, s));
      out.breakpoints.push_back(static_cast<double>(p));
      out.values.push_back(acc.value());
    }
  });
  return out;
}

DensityReport char_bias_density(std::uint64_t X, double s, double lower, int sign,
                                const SieveOptions& opts) {
  check_exponent(s);
  SignSetAccumulator measure(lower, sign);
  CompensatedSum acc;
  if (X >= 3) {
    for_each_prime_segment(3, X, opts, [&](std::span<const std::uint64_t> ps) {
      for (const auto p : ps) {
        acc.add(bias_jump(p, s));
        measure.step(static_cast<double>(p), acc.value());
      }
    });
  }
  return measure.finish(static_cast<double>(X));
}

StepSeries tau_bias_series(const UnitaryFamily& delta, std::uint64_t X, const SieveOptions& opts) {
  if (delta.kind() != UnitaryFamily::Kind::Delta) {
    throw ConfigError("tau_bias_series needs the Delta family");
  }
  if (X > delta.coverage()) {
    throw TableTooSmall("tau_bias_series: X = " + std::to_string(X) + " beyond the tau table");
  }
  StepSeries out;
  out.x_max = static_cast<double>(X);
  if (X < 2) return out;
  CompensatedSum acc;
  for_each_prime_segment(2, X, opts, [&](std::span<const std::uint64_t> ps) {
    for (const auto p : ps) {
      acc.add(delta.trace_over_sqrt(p));
      out.breakpoints.push_back(static_cast<double>(p));
      out.values.push_back(acc.value());
    }
  });
  return out;
}

std::vector<std::pair<double, double>> sarnak_statistic(const UnitaryFamily& delta,
                                                        std::span<const double> grid,
                                                        const SieveOptions& opts) {
  if (delta.kind() != UnitaryFamily::Kind::Delta) {
    throw ConfigError("sarnak_statistic needs the Delta family");
  }
  std::vector<double> xs(grid.begin(), grid.end());
  std::sort(xs.begin(), xs.end());
  std::vector<std::uint64_t> points;
  for (const double x : xs) {
    if (!(x >= 2.0)) throw DomainError("sarnak_statistic: grid points must be >= 2");
    points.push_back(static_cast<std::uint64_t>(x));
  }
  if (!points.empty() && points.back() > delta.coverage()) {
    throw TableTooSmall("sarnak_statistic: grid beyond the tau table");
  }
  const auto sums = prime_prefix_sums<1>(points, [&](std::uint64_t p) {
    return std::array<double, 1>{delta.trace(p)};
  }, opts);
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out.emplace_back(xs[i], std::log(xs[i]) / std::sqrt(xs[i]) * sums[i][0]);
  }
  return out;
}

DensityReport densities(const StepSeries& series, double X, double lower, int sign) {
  if (X > series.x_max) throw DomainError("densities: X beyond the series domain");
  SignSetAccumulator measure(lower, sign);
  for (std::size_t i = 0; i < series.size() && series.breakpoints[i] <= X; ++i) {
    measure.step(series.breakpoints[i], series.values[i]);
  }
  return measure.finish(X);
}

std::vector<Crossing> crossings(const StepSeries& series) {
  CrossingTracker tracker;
  for (std::size_t i = 0; i < series.size(); ++i) {
    tracker.step(series.breakpoints[i], series.values[i]);
  }
  return std::move(tracker).take();
}

std::vector<std::pair<double, double>> loglog_ratio(const StepSeries& series,
                                                    std::span<const double> grid, int sign) {
  check_sign(sign);
  std::vector<std::pair<double, double>> out;
  for (const double x : grid) {
    if (!(x >= 16.0)) throw DomainError("loglog_ratio: grid point below 16");
    if (x > series.x_max) throw DomainError("loglog_ratio: grid point beyond the series domain");
    out.emplace_back(x, series.at(x) / (0.5 * sign * std::log(std::log(x))));
  }
  return out;
}

}  // namespace drh
