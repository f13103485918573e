#include <cmath>

#include "casimir/errors.hpp"
#include "casimir/units.hpp"
#include "doctest.h"

using namespace casimir;

TEST_CASE("hbar c from the stored constants") {
  CHECK(kConstants.hbar_c() == doctest::Approx(3.161526773e-26).epsilon(1e-9));
}

TEST_CASE("natural pressure unit at 1 um") {
  const double p = convert_units(1.0, Quantity::kPressure, UnitSystem::natural(1e-6), UnitSystem::si());
  // hbar c / (1e-6 m)^4 = 3.1615e-26 J m / 1e-24 m^4
  CHECK(p == doctest::Approx(3.1615267715595616e-2).epsilon(1e-12));
}

TEST_CASE("round trips are identities") {
  const UnitSystem nat = UnitSystem::natural(2.5e-7);
  for (Quantity q : {Quantity::kLength, Quantity::kTime, Quantity::kAngularFrequency, Quantity::kEnergy,
                     Quantity::kEnergyPerArea, Quantity::kForce, Quantity::kPressure}) {
    const double x = 1.2345;
    const double back = convert_units(convert_units(x, q, nat, UnitSystem::si()), q, UnitSystem::si(), nat);
    CHECK(back == doctest::Approx(x).epsilon(4e-16));
    CHECK(convert_units(x, q, UnitSystem::si(), UnitSystem::si()) == x);
    CHECK(convert_units(0.0, q, nat, UnitSystem::si()) == 0.0);
  }
}

TEST_CASE("unit system parsing") {
  CHECK(UnitSystem::parse("si").to_string() == "si");
  CHECK(UnitSystem::parse("natural:1e-06").si_value_of_unit(Quantity::kLength) == 1e-6);
  CHECK_THROWS_AS(UnitSystem::parse("cgs"), DomainError);
  CHECK_THROWS_AS(UnitSystem::parse("natural:abc"), DomainError);
  CHECK_THROWS_AS(UnitSystem::natural(-1.0), DomainError);
}
