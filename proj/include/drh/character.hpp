#pragma once

#include <cstdint>
#include <string>

namespace drh {

// Real Dirichlet character of small modulus. Modulus 1 is the trivial
// character; 3 and 4 are the nonprincipal characters chi_{-3} and chi_{-4}.
class RealCharacter {
 public:
  static RealCharacter trivial() { return RealCharacter(1); }
  static RealCharacter chi4() { return RealCharacter(4); }
  static RealCharacter chi3() { return RealCharacter(3); }
  // Throws ConfigError for moduli other than 1, 3, 4.
  static RealCharacter from_modulus(std::uint32_t q);

  [[nodiscard]] std::uint32_t modulus() const { return modulus_; }
  [[nodiscard]] bool is_trivial() const { return modulus_ == 1; }
  [[nodiscard]] std::string label() const;

  [[nodiscard]] int operator()(std::uint64_t n) const {
    switch (modulus_) {
      case 4:
        if ((n & 1U) == 0) return 0;
        return (n & 3U) == 1 ? 1 : -1;
      case 3: {
        const auto r = n % 3;
        return r == 0 ? 0 : (r == 1 ? 1 : -1);
      }
      default:
        return 1;
    }
  }

 private:
  explicit RealCharacter(std::uint32_t q) : modulus_(q) {}
  std::uint32_t modulus_;
};

}  // namespace drh
