#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "drh/character.hpp"
#include "drh/errors.hpp"
#include "drh/parallel.hpp"
#include "drh/summation.hpp"

namespace drh {

inline constexpr std::uint64_t kSieveCeiling = std::uint64_t{1} << 40;
inline constexpr std::uint64_t kDefaultSegmentLength = std::uint64_t{1} << 22;

struct SieveOptions {
  std::uint64_t segment_length = kDefaultSegmentLength;
  unsigned threads = 1;
};

struct PrimeTable {
  std::uint64_t lo = 2;
  std::uint64_t hi = 2;
  std::vector<std::uint64_t> primes;

  [[nodiscard]] std::size_t size() const { return primes.size(); }
  [[nodiscard]] auto begin() const { return primes.begin(); }
  [[nodiscard]] auto end() const { return primes.end(); }
};

struct MangoldtValue {
  std::uint64_t n = 1;
  double value = 0.0;
};

// Primes in [lo, hi], ascending. Output does not depend on segment length or
// thread count.
PrimeTable sieve_range(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts = {});

// Calls fn(primes_in_segment) for consecutive segments of [lo, hi] in
// ascending order on the calling thread. Segments are sieved ahead in
// batches of opts.threads.
void for_each_prime_segment(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts,
                            const std::function<void(std::span<const std::uint64_t>)>& fn);

// Sum of term(p) over primes p <= x. Each segment accumulates sequentially
// with compensation, and segment totals merge through a fixed pairwise tree.
template <std::size_t K, class Term>
std::array<double, K> prime_sum(std::uint64_t x, Term&& term, const SieveOptions& opts = {});

// The same sum evaluated at each checkpoint (ascending). One running
// accumulator walks the primes in order, so adding checkpoints never changes
// the value at an existing one.
template <std::size_t K, class Term>
std::vector<std::array<double, K>> prime_prefix_sums(std::span<const std::uint64_t> checkpoints,
                                                     Term&& term, const SieveOptions& opts = {});

// pi(x; q, a) for every residue a coprime to q.
std::map<std::uint64_t, std::uint64_t> count_by_class(std::uint64_t x, std::uint64_t q,
                                                      const SieveOptions& opts = {});

double mertens_sum(std::uint64_t x, const SieveOptions& opts = {});

// psi(x, chi) = sum_{n <= x} chi(n) Lambda(n); no character means the trivial one.
double chebyshev_psi(std::uint64_t x, std::optional<RealCharacter> chi = std::nullopt,
                     const SieveOptions& opts = {});

MangoldtValue mangoldt(std::uint64_t n);

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

// On-disk prime cache ("PRMT"): magic, u32 version, u64 lo, u64 hi, then
// LEB128 gaps (first prime minus lo, then consecutive differences). All
// integers little-endian. Writes go through a temp file and rename.
inline constexpr std::uint32_t kPrimeCacheVersion = 1;
void write_prime_cache(const std::filesystem::path& path, const PrimeTable& table);
PrimeTable read_prime_cache(const std::filesystem::path& path);

namespace detail {
void check_sieve_range(std::uint64_t lo, std::uint64_t hi);
std::vector<std::uint64_t> sieve_segment(std::uint64_t lo, std::uint64_t hi,
                                         std::span<const std::uint32_t> base_primes);
std::vector<std::uint32_t> base_primes_for(std::uint64_t hi);
std::vector<std::pair<std::uint64_t, std::uint64_t>> segment_bounds(std::uint64_t lo,
                                                                    std::uint64_t hi,
                                                                    std::uint64_t length);
}  // namespace detail

template <std::size_t K, class Term>
std::array<double, K> prime_sum(std::uint64_t x, Term&& term, const SieveOptions& opts) {
  if (x < 2) return {};
  detail::check_sieve_range(2, x);
  const auto base = detail::base_primes_for(x);
  const auto bounds = detail::segment_bounds(2, x, opts.segment_length);
  std::vector<SumVector<K>> parts(bounds.size());
  parallel_for(bounds.size(), opts.threads, [&](std::size_t i) {
    const auto ps = detail::sieve_segment(bounds[i].first, bounds[i].second, base);
    SumVector<K> acc;
    for (const auto p : ps) acc.add(term(p));
    parts[i] = acc;
  });
  return pairwise_merge<SumVector<K>>(parts).value();
}

template <std::size_t K, class Term>
std::vector<std::array<double, K>> prime_prefix_sums(std::span<const std::uint64_t> checkpoints,
                                                     Term&& term, const SieveOptions& opts) {
  std::vector<std::array<double, K>> out(checkpoints.size());
  if (checkpoints.empty()) return out;
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < checkpoints[i - 1]) {
      throw ConfigError("prime_prefix_sums: checkpoints must be ascending");
    }
  }
  std::size_t next = 0;
  while (next < checkpoints.size() && checkpoints[next] < 2) out[next++] = {};
  if (next == checkpoints.size()) return out;

  SumVector<K> acc;
  std::vector<std::array<double, K>> terms;
  for_each_prime_segment(2, checkpoints.back(), opts, [&](std::span<const std::uint64_t> ps) {
    // Terms are independent; only the accumulation order matters.
    terms.resize(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) terms[i] = term(ps[i]);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      while (next < checkpoints.size() && checkpoints[next] < ps[i]) {
        out[next++] = acc.value();
      }
      acc.add(terms[i]);
    }
  });
  while (next < checkpoints.size()) out[next++] = acc.value();
  return out;
}

}  // namespace drh
