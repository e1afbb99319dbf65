#include "drh/ntt.hpp"

#include <bit>
#include <string>

#include "drh/errors.hpp"
#include "drh/primes.hpp"

namespace drh {

Montgomery::Montgomery(std::uint64_t modulus) : mod_(modulus) {
  if (modulus < 3 || (modulus & 1U) == 0 || modulus >= (std::uint64_t{1} << 62)) {
    throw ConfigError("Montgomery: modulus must be odd and below 2^62");
  }
  // Newton iteration for mod^{-1} mod 2^64.
  std::uint64_t inv = modulus;
  for (int i = 0; i < 6; ++i) inv *= 2 - modulus * inv;
  neg_inv_ = ~inv + 1;
  r1_ = static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) % modulus);
  r2_ = static_cast<std::uint64_t>(static_cast<unsigned __int128>(r1_) * r1_ % modulus);
}

std::uint64_t Montgomery::to_mont(std::uint64_t a) const { return mul(a % mod_, r2_); }

std::uint64_t Montgomery::pow(std::uint64_t base_mont, std::uint64_t e) const {
  std::uint64_t r = r1_;
  while (e != 0) {
    if ((e & 1U) != 0) r = mul(r, base_mont);
    base_mont = mul(base_mont, base_mont);
    e >>= 1;
  }
  return r;
}

unsigned two_adicity(std::uint64_t modulus) {
  if (modulus < 2) return 0;
  return static_cast<unsigned>(std::countr_zero(modulus - 1));
}

namespace {

Montgomery checked_montgomery(std::uint64_t modulus) {
  if (!is_prime_u64(modulus)) {
    throw ConfigError("NTT modulus " + std::to_string(modulus) + " is not prime");
  }
  return Montgomery(modulus);
}

}  // namespace

NttContext::NttContext(std::uint64_t modulus)
    : mont_(checked_montgomery(modulus)), max_log2_(two_adicity(modulus)) {
  if (max_log2_ < 1) throw ConfigError("NTT modulus has no power-of-two roots of unity");
  // A quadratic non-residue raised to (p-1)/2^v has order exactly 2^v.
  const std::uint64_t half = (modulus - 1) / 2;
  const std::uint64_t minus_one = mont_.sub(0, mont_.one());
  for (std::uint64_t a = 2;; ++a) {
    const auto am = mont_.to_mont(a);
    if (mont_.pow(am, half) == minus_one) {
      max_root_ = mont_.pow(am, (modulus - 1) >> max_log2_);
      break;
    }
  }
}

unsigned NttContext::log2_for(std::size_t needed) const {
  const unsigned log2 = needed <= 1 ? 0 : static_cast<unsigned>(std::bit_width(needed - 1));
  if (log2 > max_log2_) {
    throw CeilingError("transform length 2^" + std::to_string(log2) +
                       " exceeds the supported order 2^" + std::to_string(max_log2_) +
                       " for modulus " + std::to_string(modulus()));
  }
  return log2;
}

// roots_[len + j] = w_{2 len}^j for power-of-two len < n.
void NttContext::prepare(unsigned log2) const {
  if (prepared_log2_ >= log2 && !roots_.empty()) return;
  const std::size_t n = std::size_t{1} << log2;
  roots_.assign(n, 0);
  inv_roots_.assign(n, 0);
  for (std::size_t len = 1; len < n; len <<= 1) {
    const unsigned order_log2 = static_cast<unsigned>(std::countr_zero(len)) + 1;
    const std::uint64_t w = mont_.pow(max_root_, std::uint64_t{1} << (max_log2_ - order_log2));
    const std::uint64_t w_inv = mont_.pow(w, (std::uint64_t{1} << order_log2) - 1);
    std::uint64_t cur = mont_.one();
    std::uint64_t cur_inv = mont_.one();
    for (std::size_t j = 0; j < len; ++j) {
      roots_[len + j] = cur;
      inv_roots_[len + j] = cur_inv;
      cur = mont_.mul(cur, w);
      cur_inv = mont_.mul(cur_inv, w_inv);
    }
  }
  prepared_log2_ = log2;
}

// Decimation in frequency: natural order in, bit-reversed order out.
void NttContext::forward(std::vector<std::uint64_t>& a) const {
  const std::size_t n = a.size();
  for (std::size_t len = n / 2; len >= 1; len >>= 1) {
    for (std::size_t i = 0; i < n; i += 2 * len) {
      for (std::size_t j = 0; j < len; ++j) {
        const std::uint64_t u = a[i + j];
        const std::uint64_t v = a[i + j + len];
        a[i + j] = mont_.add(u, v);
        a[i + j + len] = mont_.mul(mont_.sub(u, v), roots_[len + j]);
      }
    }
  }
}

// Decimation in time with inverse roots: bit-reversed in, natural out, scaled by 1/n.
void NttContext::inverse(std::vector<std::uint64_t>& a) const {
  const std::size_t n = a.size();
  for (std::size_t len = 1; len < n; len <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * len) {
      for (std::size_t j = 0; j < len; ++j) {
        const std::uint64_t u = a[i + j];
        const std::uint64_t v = mont_.mul(a[i + j + len], inv_roots_[len + j]);
        a[i + j] = mont_.add(u, v);
        a[i + j + len] = mont_.sub(u, v);
      }
    }
  }
  const std::uint64_t n_inv = mont_.pow(mont_.to_mont(n), modulus() - 2);
  for (auto& x : a) x = mont_.mul(x, n_inv);
}

std::vector<std::uint64_t> NttContext::convolve(std::span<const std::uint64_t> a,
                                                std::span<const std::uint64_t> b,
                                                std::size_t out_len) const {
  if (a.empty() || b.empty()) return {};
  const std::size_t full = a.size() + b.size() - 1;
  if (out_len == 0 || out_len > full) out_len = full;
  const unsigned log2 = log2_for(full);
  prepare(log2);
  const std::size_t n = std::size_t{1} << log2;

  std::vector<std::uint64_t> fa(n, 0);
  std::vector<std::uint64_t> fb(n, 0);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = mont_.to_mont(a[i]);
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = mont_.to_mont(b[i]);
  forward(fa);
  forward(fb);
  for (std::size_t i = 0; i < n; ++i) fa[i] = mont_.mul(fa[i], fb[i]);
  fb = {};
  inverse(fa);
  fa.resize(out_len);
  for (auto& x : fa) x = mont_.from_mont(x);
  return fa;
}

std::vector<std::uint64_t> NttContext::square(std::span<const std::uint64_t> a,
                                              std::size_t out_len) const {
  if (a.empty()) return {};
  if (out_len == 0) out_len = 2 * a.size() - 1;
  // Only the first out_len input terms can reach the kept output.
  const std::size_t used = std::min(a.size(), out_len);
  const unsigned log2 = log2_for(2 * used - 1);
  prepare(log2);
  const std::size_t n = std::size_t{1} << log2;

  std::vector<std::uint64_t> fa(n, 0);
  for (std::size_t i = 0; i < used; ++i) fa[i] = mont_.to_mont(a[i]);
  forward(fa);
  for (auto& x : fa) x = mont_.mul(x, x);
  inverse(fa);
  fa.resize(std::min(out_len, 2 * used - 1));
  for (auto& x : fa) x = mont_.from_mont(x);
  fa.resize(out_len, 0);
  return fa;
}

std::vector<std::uint64_t> exact_convolve(std::span<const std::uint64_t> a,
                                          std::span<const std::uint64_t> b,
                                          std::uint64_t modulus) {
  const NttContext ctx(modulus);
  for (const auto v : a) {
    if (v >= modulus) throw ConfigError("exact_convolve: input not reduced modulo the prime");
  }
  for (const auto v : b) {
    if (v >= modulus) throw ConfigError("exact_convolve: input not reduced modulo the prime");
  }
  return ctx.convolve(a, b);
}

}  // namespace drh
