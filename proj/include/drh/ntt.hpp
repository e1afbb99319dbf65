#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace drh {

// Montgomery arithmetic modulo an odd prime below 2^62. Values are kept in
// Montgomery form internally; to_mont/from_mont convert at the edges.
class Montgomery {
 public:
  explicit Montgomery(std::uint64_t modulus);

  [[nodiscard]] std::uint64_t modulus() const { return mod_; }
  [[nodiscard]] std::uint64_t to_mont(std::uint64_t a) const;
  [[nodiscard]] std::uint64_t from_mont(std::uint64_t a) const { return reduce(a); }

  [[nodiscard]] std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return reduce(static_cast<unsigned __int128>(a) * b);
  }
  [[nodiscard]] std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s = a + b;
    return s >= mod_ ? s - mod_ : s;
  }
  [[nodiscard]] std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + mod_ - b;
  }
  [[nodiscard]] std::uint64_t pow(std::uint64_t base_mont, std::uint64_t e) const;
  [[nodiscard]] std::uint64_t one() const { return r1_; }

 private:
  [[nodiscard]] std::uint64_t reduce(unsigned __int128 t) const {
    const std::uint64_t m = static_cast<std::uint64_t>(t) * neg_inv_;
    const auto u =
        static_cast<std::uint64_t>((t + static_cast<unsigned __int128>(m) * mod_) >> 64);
    return u >= mod_ ? u - mod_ : u;
  }

  std::uint64_t mod_;
  std::uint64_t neg_inv_;  // -mod^{-1} mod 2^64
  std::uint64_t r1_;       // 2^64 mod p
  std::uint64_t r2_;       // 2^128 mod p
};

// Number-theoretic transform over Z/p for one transform-friendly prime p.
// Lengths are powers of two up to 2^two_adicity(p). Twiddle tables grow lazily,
// so one context must not be shared between threads.
class NttContext {
 public:
  explicit NttContext(std::uint64_t modulus);

  [[nodiscard]] std::uint64_t modulus() const { return mont_.modulus(); }
  [[nodiscard]] unsigned max_log2() const { return max_log2_; }

  // Linear convolution of reduced inputs, truncated to out_len terms (0 = full).
  [[nodiscard]] std::vector<std::uint64_t> convolve(std::span<const std::uint64_t> a,
                                                    std::span<const std::uint64_t> b,
                                                    std::size_t out_len = 0) const;

  // a * a as exactly out_len terms (zero-padded past the full product; 0 = full).
  [[nodiscard]] std::vector<std::uint64_t> square(std::span<const std::uint64_t> a,
                                                  std::size_t out_len) const;

 private:
  void forward(std::vector<std::uint64_t>& a) const;
  void inverse(std::vector<std::uint64_t>& a) const;
  void prepare(unsigned log2) const;
  [[nodiscard]] unsigned log2_for(std::size_t needed) const;

  Montgomery mont_;
  unsigned max_log2_;
  std::uint64_t max_root_;  // Montgomery form, order 2^max_log2_
  mutable unsigned prepared_log2_ = 0;
  mutable std::vector<std::uint64_t> roots_;
  mutable std::vector<std::uint64_t> inv_roots_;
};

// Exponent of the largest power of two dividing modulus - 1.
unsigned two_adicity(std::uint64_t modulus);

// Linear convolution of a and b modulo a transform-friendly prime.
// Throws ConfigError for an unusable modulus or unreduced inputs and
// CeilingError when the padded length exceeds 2^two_adicity(modulus).
std::vector<std::uint64_t> exact_convolve(std::span<const std::uint64_t> a,
                                          std::span<const std::uint64_t> b,
                                          std::uint64_t modulus);

}  // namespace drh
