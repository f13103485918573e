#include "casimir/units.hpp"

#include <cmath>
#include <sstream>

#include "casimir/errors.hpp"

namespace casimir {

UnitSystem UnitSystem::natural(double length_scale_m) {
  if (!(length_scale_m > 0.0) || !std::isfinite(length_scale_m)) {
    throw DomainError("natural unit system needs a positive finite length scale");
  }
  return UnitSystem(Kind::kNatural, length_scale_m);
}

UnitSystem UnitSystem::parse(std::string_view text) {
  if (text == "si" || text == "SI") return si();
  constexpr std::string_view prefix = "natural:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string number(text.substr(prefix.size()));
    std::size_t used = 0;
    double scale = 0.0;
    try {
      scale = std::stod(number, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != number.size()) {
      throw DomainError("bad length scale in unit system '" + std::string(text) + "'");
    }
    return natural(scale);
  }
  throw DomainError("unknown unit system '" + std::string(text) + "'");
}

double UnitSystem::si_value_of_unit(Quantity q) const {
  if (kind_ == Kind::kSi) return 1.0;
  const double L = length_scale_m_;
  const double hc = kConstants.hbar_c();
  switch (q) {
    case Quantity::kLength:
      return L;
    case Quantity::kTime:
      return L / kConstants.c;
    case Quantity::kAngularFrequency:
      return kConstants.c / L;
    case Quantity::kEnergy:
      return hc / L;
    case Quantity::kEnergyPerArea:
      return hc / (L * L * L);
    case Quantity::kForce:
      return hc / (L * L);
    case Quantity::kPressure:
      return hc / (L * L * L * L);
  }
  throw DomainError("unknown quantity");
}

std::string UnitSystem::to_string() const {
  if (kind_ == Kind::kSi) return "si";
  std::ostringstream os;
  os.precision(17);
  os << "natural:" << length_scale_m_;
  return os.str();
}

double convert_units(double value, Quantity quantity, const UnitSystem& from, const UnitSystem& to) {
  if (value == 0.0) return 0.0;
  return value * (from.si_value_of_unit(quantity) / to.si_value_of_unit(quantity));
}

}  // namespace casimir
