#include "drh/euler_lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "drh/errors.hpp"
#include "drh/special.hpp"

namespace drh {

namespace {

std::vector<std::uint64_t> floor_checkpoints(std::span<const double> grid) {
  std::vector<std::uint64_t> out;
  out.reserve(grid.size());
  for (const double c : grid) {
    if (!(c >= 0.0)) throw ConfigError("checkpoints must be non-negative");
    out.push_back(static_cast<std::uint64_t>(std::floor(c)));
  }
  return out;
}

void require_reach(const UnitaryFamily& family, double x) {
  if (x > static_cast<double>(family.coverage())) {
    throw TableTooSmall(family.label() + ": x = " + std::to_string(x) +
                        " is beyond the tau table (N = " + std::to_string(family.coverage()) +
                        ")");
  }
}

std::vector<double> sorted_grid(double x, std::span<const double> checkpoints) {
  std::vector<double> grid(checkpoints.begin(), checkpoints.end());
  for (const double c : grid) {
    if (c > x) throw ConfigError("checkpoint beyond x");
  }
  grid.push_back(x);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// {log factor, I, II, III, tail bound} for one prime.
std::array<double, 5> decomposition_terms(const UnitaryFamily& family, std::uint64_t p) {
  if (family.is_ramified(p)) return {};
  const auto x = static_cast<double>(p);
  const double inv_sqrt = 1.0 / std::sqrt(x);
  const double trace = family.trace(p);

  std::array<double, 5> t{};
  t[0] = family.log_local_factor_center(p);
  t[1] = family.trace_over_sqrt(p);
  t[2] = 0.5 * family.trace_power(p, 2) / x;

  // tr M^k by the same recurrence trace_power uses, carried along k.
  double prev = family.degree() == 1 ? trace * trace : trace * trace - 2.0;  // k = 2
  double prev2 = trace;                                              // k = 1
  double weight = x * std::sqrt(x);                                  // p^{3/2}
  double third = 0.0;
  unsigned k = 3;
  for (; 1.0 / weight >= kSeriesCutoff; ++k) {
    double tk = 0.0;
    if (family.degree() == 1) {
      tk = trace * prev;
    } else {
      tk = trace * prev - prev2;
    }
    third += tk / (k * weight);
    prev2 = prev;
    prev = tk;
    weight *= std::sqrt(x);
  }
  t[3] = third;
  // sum_{j >= k} r / (j p^{j/2}) <= r p^{-k/2} / (k (1 - p^{-1/2}))
  t[4] = family.degree() / (weight * k * (1.0 - inv_sqrt));
  return t;
}

}  // namespace

double Decomposition::identity_gap() const { return std::abs(I + II + III - log_product); }

ProductTrace partial_product_log(const UnitaryFamily& family, double x,
                                 std::span<const double> checkpoints, const SieveOptions& opts) {
  require_reach(family, x);
  ProductTrace trace;
  trace.family = family.label();
  trace.grid = sorted_grid(x, checkpoints);
  const auto points = floor_checkpoints(trace.grid);
  const auto sums = prime_prefix_sums<1>(points, [&](std::uint64_t p) {
    return std::array<double, 1>{family.log_local_factor_center(p)};
  }, opts);
  trace.log_values.reserve(sums.size());
  for (const auto& s : sums) trace.log_values.push_back(s[0]);
  return trace;
}

std::vector<Decomposition> decompose(const UnitaryFamily& family,
                                     std::span<const double> checkpoints,
                                     const SieveOptions& opts) {
  if (checkpoints.empty()) return {};
  std::vector<double> grid(checkpoints.begin(), checkpoints.end());
  std::sort(grid.begin(), grid.end());
  require_reach(family, grid.back());
  const auto points = floor_checkpoints(grid);
  const auto sums = prime_prefix_sums<5>(points, [&](std::uint64_t p) {
    return decomposition_terms(family, p);
  }, opts);
  std::vector<Decomposition> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& s = sums[i];
    out.push_back({grid[i], s[1], s[2], s[3], s[0], s[4]});
  }
  return out;
}

Decomposition decompose(const UnitaryFamily& family, double x, const SieveOptions& opts) {
  const double grid[] = {x};
  return decompose(family, grid, opts).front();
}

LValue lvalue_chi4_center(std::size_t depth) {
  auto term = [](std::size_t k) { return 1.0 / std::sqrt(2.0 * static_cast<double>(k) + 1.0); };
  const double a = alternating_sum_cvz(term, depth);
  const double b = alternating_sum_cvz(term, depth + 8);
  const double diff = std::abs(a - b);
  if (diff > 1e-10) {
    throw ValidationError("L(1/2, chi4): acceleration depths " + std::to_string(depth) + " and " +
                          std::to_string(depth + 8) + " disagree by " + std::to_string(diff));
  }
  // Rounding floor of the weighted sum: its weights have unit l1 norm.
  const double rounding = 16 * std::numeric_limits<double>::epsilon() * static_cast<double>(depth);
  return {"L(1/2,chi4)", b, "cvz-alternating-depth-" + std::to_string(depth + 8),
          diff + rounding};
}

LValue lvalue_character_center_richardson(const RealCharacter& chi) {
  const std::uint32_t q = chi.modulus();
  if (q != 3 && q != 4) throw ConfigError("L-value by blocks needs modulus 3 or 4");
  constexpr std::size_t kBase = 64;
  constexpr std::size_t kLevels = 15;
  std::vector<double> partial;
  long double sum = 0.0L;
  std::size_t m = 0;
  for (std::size_t level = 0; level < kLevels; ++level) {
    const std::size_t target = kBase << level;
    for (; m < target; ++m) {
      for (std::uint32_t r = 1; r < q; ++r) {
        const int c = chi(r);
        if (c == 0) continue;
        sum += c / std::sqrt(static_cast<long double>(q) * m + r);
      }
    }
    partial.push_back(static_cast<double>(sum));
  }
  double error = 0.0;
  const double value = richardson_extrapolate(
      partial, 2.0, [](std::size_t j) { return 0.5 + static_cast<double>(j); }, &error);
  return {"L(1/2," + chi.label() + ")", value, "block-sums-richardson", error};
}

double delta_smoothing_weight(std::uint64_t n) {
  const auto x = static_cast<double>(n);
  return 2.0 * regularized_gamma_q(6.0, 2.0 * std::numbers::pi * x) / std::pow(x, 6.0);
}

LValue lvalue_delta_center(const TauTable& table, std::uint64_t cutoff) {
  if (cutoff < 2) throw ConfigError("lvalue_delta_center: cutoff must be at least 2");
  if (table.size() < cutoff) {
    throw TableTooSmall("lvalue_delta_center: tau table shorter than the cutoff " +
                        std::to_string(cutoff));
  }
  CompensatedSum half;
  CompensatedSum full;
  double magnitude = 0.0;
  for (std::uint64_t n = 1; n <= cutoff; ++n) {
    const double term = static_cast<double>(table[n]) * delta_smoothing_weight(n);
    if (n <= cutoff / 2) half.add(term);
    full.add(term);
    magnitude += std::abs(term);
  }
  const double shift = std::abs(full.value() - half.value());
  if (shift > 1e-10) {
    throw ValidationError("L(1/2, Delta): halving the cutoff moves the value by " +
                          std::to_string(shift));
  }
  return {"L(1/2,delta)", full.value(), "smoothed-mellin-cutoff-" + std::to_string(cutoff),
          shift + 8 * std::numeric_limits<double>::epsilon() * magnitude};
}

LValue center_lvalue(const UnitaryFamily& family) {
  if (family.kind() == UnitaryFamily::Kind::Delta) {
    return lvalue_delta_center(*family.tau_table(),
                               std::min<std::uint64_t>(2000, family.tau_table()->size()));
  }
  const auto chi = *family.character();
  if (chi.modulus() == 4) return lvalue_chi4_center();
  return lvalue_character_center_richardson(chi);
}

double drh_log_ratio(const UnitaryFamily& family, double log_product, const LValue& lvalue) {
  if (!(lvalue.value > 0.0)) throw DomainError("DRH ratio needs a positive centre L-value");
  return log_product - 0.5 * family.delta() * std::numbers::ln2 - std::log(lvalue.value);
}

double drh_ratio(const UnitaryFamily& family, double x, const LValue& lvalue,
                 const SieveOptions& opts) {
  const auto trace = partial_product_log(family, x, {}, opts);
  return std::exp(drh_log_ratio(family, trace.log_values.back(), lvalue));
}

}  // namespace drh
