#pragma once

#include <string>
#include <string_view>

namespace casimir {

/// CODATA 2018 values (exact in the revised SI).
struct PhysicalConstants {
  double hbar;  // J s
  double c;     // m / s
  double kB;    // J / K

  constexpr double hbar_c() const { return hbar * c; }
};

inline constexpr PhysicalConstants kConstants{1.054571817e-34, 299792458.0, 1.380649e-23};

enum class Quantity {
  kLength,
  kTime,
  kAngularFrequency,
  kEnergy,
  kEnergyPerArea,
  kForce,
  kPressure,
};

/// Either SI or natural units (hbar = c = 1) with an explicit length scale.
class UnitSystem {
 public:
  static UnitSystem si() { return UnitSystem(Kind::kSi, 1.0); }
  static UnitSystem natural(double length_scale_m);

  /// Accepts "si" or "natural:<length in metres>", e.g. "natural:1e-6".
  static UnitSystem parse(std::string_view text);

  bool is_natural() const { return kind_ == Kind::kNatural; }
  double length_scale_m() const { return length_scale_m_; }

  /// Size of one unit of `q` in this system, expressed in SI.
  double si_value_of_unit(Quantity q) const;

  std::string to_string() const;

 private:
  enum class Kind { kSi, kNatural };
  UnitSystem(Kind kind, double length_scale_m) : kind_(kind), length_scale_m_(length_scale_m) {}

  Kind kind_;
  double length_scale_m_;
};

double convert_units(double value, Quantity quantity, const UnitSystem& from, const UnitSystem& to);

}  // namespace casimir
