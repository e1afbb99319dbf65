#include "drh/primes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "binary_io.hpp"
#include "drh/errors.hpp"

namespace drh {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e != 0) {
    if ((e & 1U) != 0) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

constexpr char kPrimeMagic[4] = {'P', 'R', 'M', 'T'};

}  // namespace

namespace detail {

void check_sieve_range(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 2) throw ConfigError("sieve_range: lower bound must be at least 2");
  if (lo > hi) {
    throw ConfigError("sieve_range: invalid range [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  if (hi > kSieveCeiling) {
    throw CeilingError("sieve_range: upper bound " + std::to_string(hi) +
                       " exceeds the 2^40 ceiling");
  }
}

std::vector<std::uint32_t> base_primes_for(std::uint64_t hi) {
  const auto limit = isqrt(hi);
  std::vector<std::uint8_t> mark(limit + 1, 1);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (mark[i] == 0) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) mark[j] = 0;
  }
  return out;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> segment_bounds(std::uint64_t lo,
                                                                    std::uint64_t hi,
                                                                    std::uint64_t length) {
  if (length == 0) throw ConfigError("segment length must be positive");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::uint64_t a = lo;; a += length) {
    const std::uint64_t b = (hi - a < length) ? hi : a + length - 1;
    out.emplace_back(a, b);
    if (b == hi) break;
  }
  return out;
}

// Odd-only Eratosthenes over [lo, hi]; base_primes must cover sqrt(hi).
std::vector<std::uint64_t> sieve_segment(std::uint64_t lo, std::uint64_t hi,
                                         std::span<const std::uint32_t> base_primes) {
  std::vector<std::uint64_t> out;
  if (lo <= 2 && 2 <= hi) out.push_back(2);
  std::uint64_t start = std::max<std::uint64_t>(lo, 3);
  if ((start & 1U) == 0) ++start;
  if (start > hi) return out;

  const std::uint64_t count = (hi - start) / 2 + 1;
  std::vector<std::uint8_t> mark(count, 1);
  for (const std::uint64_t p : base_primes) {
    if (p == 2) continue;
    if (p * p > hi) break;
    std::uint64_t first = std::max(p * p, (start + p - 1) / p * p);
    if ((first & 1U) == 0) first += p;
    for (std::uint64_t j = (first - start) / 2; j < count; j += p) mark[j] = 0;
  }
  out.reserve(out.size() + count / 8);
  for (std::uint64_t i = 0; i < count; ++i) {
    if (mark[i] != 0) out.push_back(start + 2 * i);
  }
  return out;
}

}  // namespace detail

void for_each_prime_segment(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts,
                            const std::function<void(std::span<const std::uint64_t>)>& fn) {
  detail::check_sieve_range(lo, hi);
  const auto base = detail::base_primes_for(hi);
  const auto bounds = detail::segment_bounds(lo, hi, opts.segment_length);
  const std::size_t batch = std::max(1U, opts.threads);
  std::vector<std::vector<std::uint64_t>> ready(batch);
  for (std::size_t first = 0; first < bounds.size(); first += batch) {
    const std::size_t n = std::min(batch, bounds.size() - first);
    parallel_for(n, opts.threads, [&](std::size_t i) {
      ready[i] = detail::sieve_segment(bounds[first + i].first, bounds[first + i].second, base);
    });
    for (std::size_t i = 0; i < n; ++i) fn(ready[i]);
  }
}

PrimeTable sieve_range(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts) {
  detail::check_sieve_range(lo, hi);
  PrimeTable table{lo, hi, {}};
  for_each_prime_segment(lo, hi, opts, [&](std::span<const std::uint64_t> ps) {
    table.primes.insert(table.primes.end(), ps.begin(), ps.end());
  });
  return table;
}

std::map<std::uint64_t, std::uint64_t> count_by_class(std::uint64_t x, std::uint64_t q,
                                                      const SieveOptions& opts) {
  if (q == 0) throw ConfigError("count_by_class: modulus must be positive");
  if (x < 2) throw ConfigError("count_by_class: x must be at least 2");
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t a = 0; a < q; ++a) {
    if (std::gcd(a, q) == 1) counts[a] = 0;
  }
  for_each_prime_segment(2, x, opts, [&](std::span<const std::uint64_t> ps) {
    for (const auto p : ps) {
      const auto it = counts.find(p % q);
      if (it != counts.end()) ++it->second;
    }
  });
  return counts;
}

double mertens_sum(std::uint64_t x, const SieveOptions& opts) {
  if (x < 2) throw ConfigError("mertens_sum: x must be at least 2");
  return prime_sum<1>(x, [](std::uint64_t p) {
    return std::array<double, 1>{1.0 / static_cast<double>(p)};
  }, opts)[0];
}

double chebyshev_psi(std::uint64_t x, std::optional<RealCharacter> chi, const SieveOptions& opts) {
  if (x < 1) throw ConfigError("chebyshev_psi: x must be at least 1");
  if (x < 2) return 0.0;
  const RealCharacter character = chi.value_or(RealCharacter::trivial());
  return prime_sum<1>(x, [&](std::uint64_t p) {
    int powers = 1;
    for (std::uint64_t pk = p; pk <= x / p; pk *= p) ++powers;
    // sum_{k=1}^{powers} chi(p)^k with chi(p) in {-1, 0, 1}
    const int c = character(p);
    int weight = 0;
    if (c == 1) weight = powers;
    if (c == -1) weight = (powers % 2 == 1) ? -1 : 0;
    return std::array<double, 1>{weight * std::log(static_cast<double>(p))};
  }, opts)[0];
}

MangoldtValue mangoldt(std::uint64_t n) {
  if (n == 0) throw DomainError("mangoldt: n must be positive");
  MangoldtValue out{n, 0.0};
  if (n == 1) return out;
  std::uint64_t p = n;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      p = d;
      break;
    }
  }
  std::uint64_t m = n;
  while (m % p == 0) m /= p;
  if (m == 1) out.value = std::log(static_cast<double>(p));
  return out;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (const std::uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1U) == 0) {
    d >>= 1;
    ++r;
  }
  for (const std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t y = powmod(a, d, n);
    if (y == 1 || y == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      y = mulmod(y, y, n);
      if (y == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

void write_prime_cache(const std::filesystem::path& path, const PrimeTable& table) {
  std::string out(kPrimeMagic, 4);
  io::put_u32(out, kPrimeCacheVersion);
  io::put_u64(out, table.lo);
  io::put_u64(out, table.hi);
  std::uint64_t prev = table.lo;
  for (const auto p : table.primes) {
    io::put_varint(out, p - prev);
    prev = p;
  }
  io::write_file_atomically(path, out);
}

PrimeTable read_prime_cache(const std::filesystem::path& path) {
  io::Reader in(io::read_file(path));
  if (in.bytes(4) != std::string_view(kPrimeMagic, 4)) {
    throw ValidationError("not a prime cache: " + path.string());
  }
  if (const auto version = in.u32(); version != kPrimeCacheVersion) {
    throw ValidationError("unsupported prime cache version " + std::to_string(version));
  }
  PrimeTable table;
  table.lo = in.u64();
  table.hi = in.u64();
  std::uint64_t prev = table.lo;
  bool first = true;
  while (!in.at_end()) {
    const auto gap = in.varint();
    if (!first && gap == 0) throw ValidationError("prime cache is not strictly increasing");
    prev += gap;
    if (prev > table.hi) throw ValidationError("prime cache entry outside its range");
    table.primes.push_back(prev);
    first = false;
  }
  return table;
}

}  // namespace drh
