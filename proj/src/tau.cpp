#include "drh/tau.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "binary_io.hpp"
#include "drh/errors.hpp"
#include "drh/ntt.hpp"
#include "drh/parallel.hpp"
#include "drh/primes.hpp"

namespace drh {

namespace {

constexpr std::array<std::uint64_t, 3> kDefaultModuli = {
    4611685944339202049ULL,  // 0x3fffffeec0000001, 2^30 | p - 1
    4611685860587339777ULL,  // 0x3fffffdb40000001, 2^30 | p - 1
    4611685989973229569ULL,  // 0x3ffffff960000001, 2^29 | p - 1
};
constexpr std::uint64_t kCheckModulus = 4611685984336084993ULL;  // 2^28 | p - 1
constexpr std::array<std::uint64_t, 3> kAlternateModuli = {
    4611686009971671041ULL,  // 2^27 | p - 1
    4611686007555751937ULL,  // 2^27 | p - 1
    4611686017554972673ULL,  // 2^26 | p - 1
};

constexpr char kTauMagic[4] = {'T', 'A', 'U', 'C'};

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return a >= b ? a - b : a + (m - b);
}

std::uint64_t reduce_signed(Int128 v, std::uint64_t m) {
  Int128 r = v % static_cast<Int128>(m);
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

// Inverse of a modulo m for gcd(a, m) = 1.
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  Int128 t = 0;
  Int128 new_t = 1;
  Int128 r = m;
  Int128 new_r = a % m;
  while (new_r != 0) {
    const Int128 q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw ConfigError("CRT moduli are not pairwise coprime");
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

void require_usable_moduli(std::span<const std::uint64_t> moduli, std::uint64_t n) {
  if (moduli.size() < 2) throw ConfigError("tau table needs at least two CRT moduli");
  // Final coefficients satisfy |tau(n)| <= 2 N^6; the balanced lift needs P > 2 * bound.
  long double bits = 0.0L;
  for (const auto m : moduli) bits += std::log2(static_cast<long double>(m));
  const long double needed = 2.0L + 6.0L * std::log2(static_cast<long double>(n));
  if (bits <= needed) {
    throw ConfigError("CRT moduli product too small for N = " + std::to_string(n));
  }
}

}  // namespace

std::span<const std::uint64_t> default_tau_moduli() { return kDefaultModuli; }
std::uint64_t tau_check_modulus() { return kCheckModulus; }
std::span<const std::uint64_t> alternate_tau_moduli() { return kAlternateModuli; }

Int128 TauTable::at(std::uint64_t n) const {
  if (n < 1 || n > values_.size()) {
    throw ConfigError("tau index " + std::to_string(n) + " outside [1, " +
                      std::to_string(values_.size()) + "]");
  }
  return values_[n - 1];
}

CrtBasis::CrtBasis(std::span<const std::uint64_t> moduli)
    : moduli_(moduli.begin(), moduli.end()) {
  if (moduli_.empty()) throw ConfigError("CRT basis needs at least one modulus");
  for (const auto m : moduli_) {
    if (m < 3 || (m & 1U) == 0) throw ConfigError("CRT moduli must be odd and at least 3");
  }
  inv_prefix_.resize(moduli_.size(), 1);
  prefix_mod_.resize(moduli_.size());
  for (std::size_t i = 1; i < moduli_.size(); ++i) {
    const auto mi = moduli_[i];
    std::uint64_t prod = 1 % mi;
    for (std::size_t j = 0; j < i; ++j) {
      prefix_mod_[i].push_back(prod);
      prod = mulmod(prod, moduli_[j] % mi, mi);
    }
    inv_prefix_[i] = inverse_mod(prod, mi);
  }
}

Int128 CrtBasis::lift(std::span<const std::uint64_t> residues) const {
  if (residues.size() != moduli_.size()) throw ConfigError("CRT residue count mismatch");
  std::array<Int128, 8> small{};
  std::vector<Int128> big;
  Int128* digits = small.data();
  if (moduli_.size() > small.size()) {
    big.resize(moduli_.size());
    digits = big.data();
  }

  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    const auto mi = moduli_[i];
    std::uint64_t acc = residues[i] % mi;
    for (std::size_t j = 0; j < i; ++j) {
      acc = submod(acc, mulmod(reduce_signed(digits[j], mi), prefix_mod_[i][j], mi), mi);
    }
    const std::uint64_t d = mulmod(acc, inv_prefix_[i], mi);
    digits[i] = d > (mi - 1) / 2 ? static_cast<Int128>(d) - static_cast<Int128>(mi)
                                 : static_cast<Int128>(d);
  }

  Int128 value = digits[moduli_.size() - 1];
  for (std::size_t i = moduli_.size() - 1; i-- > 0;) {
    if (__builtin_mul_overflow(value, static_cast<Int128>(moduli_[i]), &value) ||
        __builtin_add_overflow(value, digits[i], &value)) {
      throw CeilingError("CRT value does not fit in 127 bits");
    }
  }
  if (value == std::numeric_limits<Int128>::min()) {
    throw CeilingError("CRT value does not fit in 127 bits");
  }
  return value;
}

Int128 crt_reconstruct(std::span<const std::uint64_t> residues,
                       std::span<const std::uint64_t> moduli) {
  return CrtBasis(moduli).lift(residues);
}

Int128 crt_reconstruct_verified(std::span<const std::uint64_t> residues,
                                std::span<const std::uint64_t> moduli,
                                std::uint64_t check_residue, std::uint64_t check_modulus) {
  const Int128 value = crt_reconstruct(residues, moduli);
  if (reduce_signed(value, check_modulus) != check_residue % check_modulus) {
    throw ValidationError("CRT inconsistency: value " + to_string(value) +
                          " disagrees with the verification modulus");
  }
  return value;
}

TauTable build_tau_table(std::uint64_t n, const TauOptions& opts) {
  if (n < 1) throw ConfigError("tau table size must be at least 1");
  if (n > kTauCeiling) {
    throw CeilingError("tau table size " + std::to_string(n) +
                       " exceeds the exactness ceiling " + std::to_string(kTauCeiling));
  }
  require_usable_moduli(opts.moduli, n);

  std::vector<std::uint64_t> moduli = opts.moduli;
  if (opts.self_check) moduli.push_back(kCheckModulus);
  const std::size_t primary = opts.moduli.size();

  // prod (1 - q^k)^3 = sum_k (-1)^k (2k + 1) q^{k(k+1)/2}
  const std::size_t len = n;
  std::vector<std::vector<std::uint64_t>> series(moduli.size());
  parallel_for(moduli.size(), opts.threads, [&](std::size_t i) {
    const std::uint64_t m = moduli[i];
    const NttContext ctx(m);
    std::vector<std::uint64_t> a(len, 0);
    for (std::uint64_t k = 0; k * (k + 1) / 2 < len; ++k) {
      const std::uint64_t c = (2 * k + 1) % m;
      a[k * (k + 1) / 2] = (k % 2 == 0) ? c : m - c;
    }
    for (int round = 0; round < 3; ++round) a = ctx.square(a, len);
    series[i] = std::move(a);
  });

  const CrtBasis basis(std::span<const std::uint64_t>(moduli).first(primary));
  std::vector<Int128> values(len);
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(64, len / 4096));
  parallel_for(chunks, opts.threads, [&](std::size_t c) {
    std::vector<std::uint64_t> residues(primary);
    const std::size_t lo = len * c / chunks;
    const std::size_t hi = len * (c + 1) / chunks;
    for (std::size_t j = lo; j < hi; ++j) {
      for (std::size_t i = 0; i < primary; ++i) residues[i] = series[i][j];
      values[j] = basis.lift(residues);
      if (opts.self_check &&
          reduce_signed(values[j], kCheckModulus) != series[primary][j]) {
        throw ValidationError("tau(" + std::to_string(j + 1) +
                              ") disagrees with the check modulus");
      }
    }
  });
  return TauTable(std::move(values));
}

double lambda_of(std::uint64_t n, const TauTable& table) {
  const auto t = static_cast<double>(table.at(n));
  const auto x = static_cast<double>(n);
  return t / (std::pow(x, 5.0) * std::sqrt(x));
}

double theta_from_lambda(double lambda) {
  double c = lambda / 2.0;
  if (std::abs(c) > 1.0 + 1e-12 || std::isnan(c)) {
    throw ValidationError("Deligne bound violated: lambda/2 = " + std::to_string(c));
  }
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

SatakeAngle theta_of(std::uint64_t p, const TauTable& table) {
  return {p, theta_from_lambda(lambda_of(p, table))};
}

TauValidation validate_tau_table(const TauTable& table) {
  using boost::multiprecision::int256_t;
  TauValidation report;
  const std::uint64_t n = table.size();
  auto fail = [&](const std::string& what) {
    if (report.first_failure.empty()) report.first_failure = what;
  };

  report.tau_one = n >= 1 && table[1] == 1;
  if (!report.tau_one) fail("tau(1) != 1");

  report.deligne = true;
  report.hecke_square = true;
  if (n >= 2) {
    for (const auto p : sieve_range(2, n)) {
      ++report.primes_checked;
      const int256_t t = static_cast<int256_t>(to_string(table[p]));
      int256_t p11 = 1;
      for (int i = 0; i < 11; ++i) p11 *= p;
      if (!(t * t < 4 * p11)) {
        report.deligne = false;
        fail("Deligne bound fails at p = " + std::to_string(p));
      }
      if (p * p <= n) {
        ++report.square_relations_checked;
        if (static_cast<int256_t>(to_string(table[p * p])) != t * t - p11) {
          report.hecke_square = false;
          fail("tau(p^2) recursion fails at p = " + std::to_string(p));
        }
      }
    }
  }

  report.multiplicative = true;
  for (std::uint64_t a = 2; a * (a + 1) <= n; ++a) {
    for (std::uint64_t b = a + 1; a * b <= n; ++b) {
      if (std::gcd(a, b) != 1) continue;
      ++report.coprime_pairs_checked;
      Int128 prod = 0;
      if (__builtin_mul_overflow(table[a], table[b], &prod) || prod != table[a * b]) {
        report.multiplicative = false;
        fail("multiplicativity fails at " + std::to_string(a) + " * " + std::to_string(b));
      }
    }
  }
  return report;
}

std::string to_string(Int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  auto mag = neg ? static_cast<u128>(0) - static_cast<u128>(v) : static_cast<u128>(v);
  std::string s;
  while (mag != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

std::uint64_t tau_checksum(const TauTable& table) {
  std::uint64_t sum = 0;
  for (const Int128 v : table.values()) {
    const auto u = static_cast<u128>(v);
    sum += static_cast<std::uint64_t>(u);
    sum += static_cast<std::uint64_t>(u >> 64);
  }
  return sum;
}

void write_tau_cache(const std::filesystem::path& path, const TauTable& table) {
  std::string out(kTauMagic, 4);
  out.reserve(4 + 4 + 8 + 16 * table.size() + 8);
  io::put_u32(out, kTauCacheVersion);
  io::put_u64(out, table.size());
  for (const Int128 v : table.values()) {
    const auto u = static_cast<u128>(v);
    io::put_u64(out, static_cast<std::uint64_t>(u));
    io::put_u64(out, static_cast<std::uint64_t>(u >> 64));
  }
  io::put_u64(out, tau_checksum(table));
  io::write_file_atomically(path, out);
}

TauTable read_tau_cache(const std::filesystem::path& path) {
  io::Reader in(io::read_file(path));
  if (in.bytes(4) != std::string_view(kTauMagic, 4)) {
    throw ValidationError("not a tau cache: " + path.string());
  }
  if (const auto version = in.u32(); version != kTauCacheVersion) {
    throw ValidationError("unsupported tau cache version " + std::to_string(version));
  }
  const std::uint64_t n = in.u64();
  if (n > kTauCeiling || in.remaining() != 16 * n + 8) {
    throw ValidationError("tau cache length does not match its header");
  }
  std::vector<Int128> values(n);
  for (auto& v : values) {
    const std::uint64_t lo = in.u64();
    const std::uint64_t hi = in.u64();
    v = static_cast<Int128>((static_cast<u128>(hi) << 64) | lo);
  }
  TauTable table(std::move(values));
  if (in.u64() != tau_checksum(table)) {
    throw ValidationError("tau cache checksum mismatch: " + path.string());
  }
  return table;
}

}  // namespace drh
