#include "drh/character.hpp"

#include "drh/errors.hpp"

namespace drh {

RealCharacter RealCharacter::from_modulus(std::uint32_t q) {
  switch (q) {
    case 1:
    case 3:
    case 4:
      return RealCharacter(q);
    default:
      throw ConfigError("unsupported character modulus " + std::to_string(q) +
                        " (supported: 1, 3, 4)");
  }
}

std::string RealCharacter::label() const {
  switch (modulus_) {
    case 4:
      return "chi4";
    case 3:
      return "chi3";
    default:
      return "trivial";
  }
}

}  // namespace drh
