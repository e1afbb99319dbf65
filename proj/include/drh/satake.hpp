#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "drh/character.hpp"
#include "drh/tau.hpp"

namespace drh {

struct LocalFactor {
  std::uint64_t p = 2;
  std::complex<double> s;
  std::complex<double> value;  // det(1 - M(p) p^{-s})^{-1}
};

// Unitary Satake data M(p) for the two built-in families: a real Dirichlet
// character (degree 1) and Delta (degree 2, M(p) = diag(e^{i theta}, e^{-i theta})).
// Adams powers are handled through traces only. Immutable once built.
class UnitaryFamily {
 public:
  enum class Kind { Character, Delta };

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] unsigned degree() const { return kind_ == Kind::Character ? 1 : 2; }
  // delta(M) = order of the pole of L(s, M^2) at s = 1; declared per family.
  [[nodiscard]] int delta() const { return delta_; }

  [[nodiscard]] bool is_ramified(std::uint64_t p) const;
  // Largest prime the family can evaluate (tau table size for Delta).
  [[nodiscard]] std::uint64_t coverage() const;

  // tr M(p) as a real number: chi(p), or lambda(p) = tau(p) p^{-11/2}.
  [[nodiscard]] double trace(std::uint64_t p) const;
  // tr M(p)^k: chi(p)^k, or the recurrence t_0 = 2, t_1 = lambda, t_k = lambda t_{k-1} - t_{k-2}.
  [[nodiscard]] double trace_power(std::uint64_t p, unsigned k) const;

  // -log det(1 - M(p) p^{-1/2}): the log of the local factor at the centre.
  [[nodiscard]] double log_local_factor_center(std::uint64_t p) const;

  // For Delta: tr M(p) p^{-1/2} = tau(p) / p^6 evaluated from the exact integer.
  [[nodiscard]] double trace_over_sqrt(std::uint64_t p) const;

  [[nodiscard]] const TauTable* tau_table() const { return tau_.get(); }
  [[nodiscard]] std::optional<RealCharacter> character() const { return chi_; }

 private:
  friend UnitaryFamily character_family(std::uint32_t q, unsigned index);
  friend UnitaryFamily delta_family(std::shared_ptr<const TauTable> table);

  UnitaryFamily() = default;
  void require_covered(std::uint64_t p) const;

  Kind kind_ = Kind::Character;
  std::string label_;
  int delta_ = 0;
  std::optional<RealCharacter> chi_;
  std::shared_ptr<const TauTable> tau_;
};

// The nonprincipal real character modulo q in {3, 4}; index 1 selects it.
// delta = 1 because chi^2 is principal and L(s, chi^2) has a simple pole at 1.
UnitaryFamily character_family(std::uint32_t q, unsigned index = 1);

// Delta's Satake family; delta = -1.
UnitaryFamily delta_family(std::shared_ptr<const TauTable> table);

// det(1 - M(p) p^{-s})^{-1}; ramified primes give 1. Requires Re(s) > 0.
LocalFactor local_factor(const UnitaryFamily& family, std::uint64_t p, std::complex<double> s);

int delta_of(const UnitaryFamily& family);

}  // namespace drh
