#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "drh/character.hpp"
#include "drh/primes.hpp"
#include "drh/satake.hpp"
#include "drh/tau.hpp"

namespace drh {

// log prod_{p <= x} det(1 - M(p) p^{-1/2})^{-1} sampled on a grid.
struct ProductTrace {
  std::string family;
  std::vector<double> grid;        // ascending checkpoints
  std::vector<double> log_values;  // value at the last prime <= checkpoint
};

struct LValue {
  std::string target;
  double value = 0.0;
  std::string method;
  double error_estimate = 0.0;
};

// Pieces of the log partial product at s = 1/2:
//   I = sum tr M(p) / sqrt(p), II = 1/2 sum tr M(p)^2 / p,
//   III = sum_{k >= 3} 1/k sum tr M(p)^k / p^{k/2}.
// The k-sum stops once p^{-k/2} < 1e-18; truncation_bound collects the
// geometric tail bound of what was dropped.
struct Decomposition {
  double x = 0.0;
  double I = 0.0;
  double II = 0.0;
  double III = 0.0;
  double log_product = 0.0;
  double truncation_bound = 0.0;

  [[nodiscard]] double identity_gap() const;
};

inline constexpr double kSeriesCutoff = 1e-18;

// Checkpoints need not be primes or sorted; x is always included. Throws
// TableTooSmall if the family cannot reach x.
ProductTrace partial_product_log(const UnitaryFamily& family, double x,
                                 std::span<const double> checkpoints = {},
                                 const SieveOptions& opts = {});

std::vector<Decomposition> decompose(const UnitaryFamily& family,
                                     std::span<const double> checkpoints,
                                     const SieveOptions& opts = {});
Decomposition decompose(const UnitaryFamily& family, double x, const SieveOptions& opts = {});

// L(1/2, chi_{-4}) = sum (-1)^n (2n+1)^{-1/2} by Cohen-Villegas-Zagier
// acceleration; depth and depth + 8 must agree to 1e-10.
LValue lvalue_chi4_center(std::size_t depth = 40);

// L(1/2, chi) for chi mod 3 or 4 from period-block partial sums
// sum_{m < M} sum_{r mod q} chi(r) (qm + r)^{-1/2}, Richardson-extrapolated in
// M = M0, 2 M0, ... (the tail expands in M^{-1/2 - j}).
LValue lvalue_character_center_richardson(const RealCharacter& chi);

// Weight 2 Q(6, 2 pi n) / n^6 so that L(6, Delta) = sum tau(n) w(n); this is the
// completed Mellin integral split at its self-dual point y = 1.
double delta_smoothing_weight(std::uint64_t n);

// L(1/2, M) for Delta, i.e. L(6, Delta) = sum lambda(n) n^{-1/2}, from the
// smoothed sum. Requires table.size() >= cutoff; halving the cutoff must not
// move the value by more than 1e-10.
LValue lvalue_delta_center(const TauTable& table, std::uint64_t cutoff = 2000);

// Preferred centre L-value for a built-in family.
LValue center_lvalue(const UnitaryFamily& family);

// log of prod_{p<=x}(...) / (sqrt(2)^delta L(1/2, M)).
double drh_log_ratio(const UnitaryFamily& family, double log_product, const LValue& lvalue);
double drh_ratio(const UnitaryFamily& family, double x, const LValue& lvalue,
                 const SieveOptions& opts = {});

}  // namespace drh
