#include "drh/satake.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "drh/errors.hpp"

namespace drh {

UnitaryFamily character_family(std::uint32_t q, unsigned index) {
  if (q != 3 && q != 4) {
    throw ConfigError("character_family: unsupported modulus " + std::to_string(q) +
                      " (supported: 3, 4)");
  }
  if (index != 1) {
    throw ConfigError("character_family: only the nonprincipal real character (index 1) is supported");
  }
  UnitaryFamily f;
  f.kind_ = UnitaryFamily::Kind::Character;
  f.chi_ = RealCharacter::from_modulus(q);
  f.label_ = f.chi_->label();
  f.delta_ = 1;
  return f;
}

UnitaryFamily delta_family(std::shared_ptr<const TauTable> table) {
  if (!table || table->size() < 2) throw TableTooSmall("delta_family: empty tau table");
  UnitaryFamily f;
  f.kind_ = UnitaryFamily::Kind::Delta;
  f.label_ = "delta";
  f.delta_ = -1;
  f.tau_ = std::move(table);
  return f;
}

bool UnitaryFamily::is_ramified(std::uint64_t p) const {
  if (kind_ == Kind::Character) return chi_->modulus() % p == 0;
  return false;
}

std::uint64_t UnitaryFamily::coverage() const {
  if (kind_ == Kind::Character) return std::numeric_limits<std::uint64_t>::max();
  return tau_->size();
}

void UnitaryFamily::require_covered(std::uint64_t p) const {
  if (kind_ == Kind::Delta && p > tau_->size()) {
    throw TableTooSmall("prime " + std::to_string(p) + " exceeds the tau table (N = " +
                        std::to_string(tau_->size()) + ")");
  }
}

double UnitaryFamily::trace(std::uint64_t p) const {
  if (kind_ == Kind::Character) return (*chi_)(p);
  require_covered(p);
  return lambda_of(p, *tau_);
}

double UnitaryFamily::trace_power(std::uint64_t p, unsigned k) const {
  if (kind_ == Kind::Character) {
    const int c = (*chi_)(p);
    if (k == 0) return 1.0;
    return (c == -1 && k % 2 == 0) ? 1.0 : c;
  }
  const double lambda = trace(p);
  double prev = 2.0;
  if (k == 0) return prev;
  double cur = lambda;
  for (unsigned i = 1; i < k; ++i) {
    const double next = lambda * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double UnitaryFamily::trace_over_sqrt(std::uint64_t p) const {
  if (kind_ == Kind::Character) return (*chi_)(p) / std::sqrt(static_cast<double>(p));
  require_covered(p);
  const auto x = static_cast<double>(p);
  return static_cast<double>((*tau_)[p]) / std::pow(x, 6.0);
}

double UnitaryFamily::log_local_factor_center(std::uint64_t p) const {
  if (is_ramified(p)) return 0.0;
  const auto x = static_cast<double>(p);
  if (kind_ == Kind::Character) return -std::log1p(-(*chi_)(p) / std::sqrt(x));
  return -std::log1p(-trace_over_sqrt(p) + 1.0 / x);
}

LocalFactor local_factor(const UnitaryFamily& family, std::uint64_t p, std::complex<double> s) {
  if (s.real() <= 0.0) throw DomainError("local_factor: requires Re(s) > 0");
  LocalFactor out{p, s, 1.0};
  if (family.is_ramified(p)) return out;
  const std::complex<double> z = std::exp(-s * std::log(static_cast<double>(p)));
  std::complex<double> det;
  double scale = 1.0;
  if (family.degree() == 1) {
    const double c = family.trace(p);
    det = 1.0 - c * z;
    scale += std::abs(z);
  } else {
    const double lambda = family.trace(p);
    det = 1.0 - lambda * z + z * z;
    scale += std::abs(lambda * z) + std::norm(z);
  }
  if (std::abs(det) <= 8 * std::numeric_limits<double>::epsilon() * scale) {
    throw DomainError("local_factor: singular factor at p = " + std::to_string(p));
  }
  out.value = 1.0 / det;
  return out;
}

int delta_of(const UnitaryFamily& family) { return family.delta(); }

}  // namespace drh
