#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace drh {

using Int128 = __int128;

// Largest N for which every tau(n), n <= N, is guaranteed to fit the 127-bit store.
inline constexpr std::uint64_t kTauCeiling = 4'000'000;

// Transform-friendly primes below 2^62 (p = c * 2^k + 1 with k >= 25).
std::span<const std::uint64_t> default_tau_moduli();
std::uint64_t tau_check_modulus();
std::span<const std::uint64_t> alternate_tau_moduli();

struct TauOptions {
  std::vector<std::uint64_t> moduli{default_tau_moduli().begin(), default_tau_moduli().end()};
  // Also run the check modulus and verify every reconstructed coefficient against it.
  bool self_check = false;
  unsigned threads = 1;
};

// Exact tau(1..N).
class TauTable {
 public:
  TauTable() = default;
  explicit TauTable(std::vector<Int128> values) : values_(std::move(values)) {}

  [[nodiscard]] std::uint64_t size() const { return values_.size(); }
  // 1-based; throws ConfigError outside [1, N].
  [[nodiscard]] Int128 at(std::uint64_t n) const;
  [[nodiscard]] Int128 operator[](std::uint64_t n) const { return values_[n - 1]; }
  [[nodiscard]] std::span<const Int128> values() const { return values_; }

  friend bool operator==(const TauTable&, const TauTable&) = default;

 private:
  std::vector<Int128> values_;
};

// Coefficients of Delta = q prod (1 - q^k)^24 through q^N. The product is
// formed as (prod (1 - q^k)^3)^8 from the sparse Jacobi series, squared three
// times modulo each prime, then lifted by CRT.
TauTable build_tau_table(std::uint64_t n, const TauOptions& opts = {});

// Signed residue lift by Garner's algorithm with balanced digits: the unique
// value in (-P/2, P/2) for P the product of the (pairwise coprime) moduli.
// Throws CeilingError if that value does not fit in 127 bits.
Int128 crt_reconstruct(std::span<const std::uint64_t> residues,
                       std::span<const std::uint64_t> moduli);

// As above, then requires value mod check_modulus == check_residue
// (ValidationError otherwise).
Int128 crt_reconstruct_verified(std::span<const std::uint64_t> residues,
                                std::span<const std::uint64_t> moduli,
                                std::uint64_t check_residue, std::uint64_t check_modulus);

// Precomputed Garner constants for repeated lifts over one basis.
class CrtBasis {
 public:
  explicit CrtBasis(std::span<const std::uint64_t> moduli);
  [[nodiscard]] Int128 lift(std::span<const std::uint64_t> residues) const;
  [[nodiscard]] std::span<const std::uint64_t> moduli() const { return moduli_; }

 private:
  std::vector<std::uint64_t> moduli_;
  std::vector<std::uint64_t> inv_prefix_;               // (m_0 ... m_{i-1})^{-1} mod m_i
  std::vector<std::vector<std::uint64_t>> prefix_mod_;  // (m_0 ... m_{j-1}) mod m_i, j < i
};

// lambda(n) = tau(n) n^{-11/2}.
double lambda_of(std::uint64_t n, const TauTable& table);

struct SatakeAngle {
  std::uint64_t p = 2;
  double theta = 0.0;  // in [0, pi]
};

// theta = arccos(lambda / 2). |lambda/2| may exceed 1 by at most 1e-12 (clamped);
// anything larger is a Deligne violation and raises ValidationError.
double theta_from_lambda(double lambda);
SatakeAngle theta_of(std::uint64_t p, const TauTable& table);

struct TauValidation {
  bool tau_one = false;
  bool deligne = false;
  bool multiplicative = false;
  bool hecke_square = false;
  std::uint64_t primes_checked = 0;
  std::uint64_t coprime_pairs_checked = 0;
  std::uint64_t square_relations_checked = 0;
  std::string first_failure;

  [[nodiscard]] bool ok() const { return tau_one && deligne && multiplicative && hecke_square; }
};

// Exact-integer checks: tau(1) = 1, tau(p)^2 < 4 p^11, tau(mn) = tau(m) tau(n)
// for coprime m, n with mn <= N, and tau(p^2) = tau(p)^2 - p^11.
TauValidation validate_tau_table(const TauTable& table);

std::string to_string(Int128 v);

// Tau cache ("TAUC"): magic, u32 version, u64 N, N 16-byte two's-complement
// values, then a u64 checksum = sum of the payload's 64-bit words mod 2^64.
// All little-endian.
inline constexpr std::uint32_t kTauCacheVersion = 1;
std::uint64_t tau_checksum(const TauTable& table);
void write_tau_cache(const std::filesystem::path& path, const TauTable& table);
TauTable read_tau_cache(const std::filesystem::path& path);

}  // namespace drh
