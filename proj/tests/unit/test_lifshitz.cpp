#include <cmath>
#include <numbers>

#include "casimir/errors.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/units.hpp"
#include "doctest.h"
#include "oracles/lifshitz_cartesian.hpp"

using namespace casimir;
using namespace casimir::lifshitz;

namespace {
const double kPi = std::numbers::pi;
const double kHc = kConstants.hbar_c();
const double kZeta3 = 1.2020569031595942;

double ideal(double d) { return -kPi * kPi * kHc / (240.0 * std::pow(d, 4)); }
double kelvin_for(double tau, double d) { return tau * kHc / (kConstants.kB * d); }
// Classical limit of the ideal-mirror pressure: only the n = 0 term survives.
double classical(double temperature, double d) {
  return -kZeta3 * kConstants.kB * temperature / (4.0 * kPi * d * d * d);
}
}  // namespace

TEST_CASE("reflection coefficients") {
  const double k = 2e6;
  const double xi = kConstants.c * k;
  CHECK(reflection_coeff(Vacuum{}, xi, k, Polarization::kTE) == 0.0);
  CHECK(reflection_coeff(Vacuum{}, xi, k, Polarization::kTM) == 0.0);
  CHECK(reflection_coeff(PerfectMirror{}, xi, k, Polarization::kTE) == -1.0);
  CHECK(reflection_coeff(PerfectMirror{}, xi, k, Polarization::kTM) == 1.0);
  // eps = 4 at xi = c k: kappa = sqrt2 k, kappa_m = sqrt5 k.
  const double s2 = std::sqrt(2.0);
  const double s5 = std::sqrt(5.0);
  CHECK(reflection_coeff(ConstantEps{4.0}, xi, k, Polarization::kTE) ==
        doctest::Approx((s2 - s5) / (s2 + s5)).epsilon(1e-14));
  CHECK(reflection_coeff(ConstantEps{4.0}, xi, k, Polarization::kTM) ==
        doctest::Approx((4 * s2 - s5) / (4 * s2 + s5)).epsilon(1e-14));
  CHECK(reflection_coeff(ConstantEps{4.0}, xi, k, Polarization::kTE) == doctest::Approx(-0.22514822655441377));
  CHECK(reflection_coeff(ConstantEps{4.0}, xi, k, Polarization::kTM) == doctest::Approx(0.43339921180196167));
  CHECK_THROWS_AS(reflection_coeff(ConstantEps{4.0}, 0.0, k, Polarization::kTE), DomainError);
  CHECK_THROWS_AS(reflection_coeff(ConstantEps{4.0}, xi, -1.0, Polarization::kTE), DomainError);
}

TEST_CASE("passive models reflect with |r| <= 1") {
  const std::vector<DielectricModel> models{ConstantEps{1.5}, ConstantEps{80.0}, Plasma{1.37e16},
                                            Drude{1.37e16, 5.32e13}, LorentzOscillators{{{1e15, 3e15, 1e14}}}};
  for (const auto& m : models) {
    for (double xi = 1e10; xi < 1e19; xi *= 7.0) {
      for (double k = 0.0; k < 1e10; k = k * 9.0 + 1e3) {
        for (auto pol : {Polarization::kTE, Polarization::kTM}) {
          const double r = reflection_coeff(m, xi, k, pol);
          CHECK(std::abs(r) <= 1.0);
        }
      }
    }
  }
}

TEST_CASE("ideal mirrors at zero temperature") {
  const PlanarCavity c{PerfectMirror{}, PerfectMirror{}, 1e-6};
  const LifshitzResult r = evaluate(c);
  CHECK(r.pressure_Pa == doctest::Approx(ideal(1e-6)).epsilon(1e-6));
  CHECK(r.pressure_Pa == doctest::Approx(-1.3001257724477534e-3).epsilon(1e-6));
  CHECK(r.energy_per_area_Jm2 == doctest::Approx(-4.333752574825844e-10).epsilon(1e-6));
  CHECK(r.quadrature.rel_error_estimate <= 1e-6);
  CHECK(r.quadrature.integrand_evaluations > 0);
  CHECK(r.quadrature.matsubara_terms == 0);
  CHECK(!r.stress_convention.empty());
}

TEST_CASE("vacuum on either side gives nothing") {
  CHECK(pressure_zero_T({Vacuum{}, PerfectMirror{}, 1e-6}).pressure_Pa == 0.0);
  CHECK(energy_per_area({ConstantEps{3.0}, Vacuum{}, 1e-6}).energy_per_area_Jm2 == 0.0);
  CHECK(pressure({Vacuum{}, Vacuum{}, 1e-6, 300.0}).pressure_Pa == 0.0);
}

TEST_CASE("eps = 2 against a brute-force Cartesian quadrature") {
  const double d = 1e-6;
  const double p = pressure_zero_T({ConstantEps{2.0}, ConstantEps{2.0}, d}).pressure_Pa;
  auto eps2 = [](double) { return 2.0; };
  const double brute = kHc / std::pow(d, 4) * oracle::cartesian_pressure(eps2, eps2);
  CHECK(p == doctest::Approx(brute).epsilon(1e-4));
  // Frozen value from an independent scipy dblquad run, natural units.
  CHECK(p * std::pow(d, 4) / kHc == doctest::Approx(-0.0016049183203096765).epsilon(1e-6));
  const double eta = p / ideal(d);
  CHECK(eta > 0.0);
  CHECK(eta < 1.0);
}

TEST_CASE("brute-force oracle reproduces the ideal-mirror closed form") {
  auto perfect = [](double) { return INFINITY; };
  CHECK(oracle::cartesian_pressure(perfect, perfect) == doctest::Approx(-kPi * kPi / 240).epsilon(1e-4));
}

TEST_CASE("energy derivative matches pressure") {
  const double d = 1e-6;
  const double h = d * 1e-3;
  const double ep = energy_per_area({ConstantEps{2.0}, ConstantEps{2.0}, d + h}, 1e-9).energy_per_area_Jm2;
  const double em = energy_per_area({ConstantEps{2.0}, ConstantEps{2.0}, d - h}, 1e-9).energy_per_area_Jm2;
  const double p = pressure_zero_T({ConstantEps{2.0}, ConstantEps{2.0}, d}).pressure_Pa;
  CHECK(-(ep - em) / (2 * h) == doctest::Approx(p).epsilon(1e-4));
  CHECK(energy_per_area({ConstantEps{2.0}, ConstantEps{2.0}, d}).energy_per_area_Jm2 * d * d * d / kHc ==
        doctest::Approx(-0.0005349727734365599).epsilon(1e-6));
}

TEST_CASE("attraction and monotone decay with gap") {
  const Drude gold{1.37e16, 5.32e13};
  for (double temperature : {0.0, 300.0}) {
    double prev = -INFINITY;
    for (double d = 1e-7; d < 2e-5; d *= 2.5) {
      const double p = pressure({gold, gold, d, temperature}).pressure_Pa;
      CHECK(p < 0.0);
      CHECK(p > prev);
      prev = p;
    }
  }
}

TEST_CASE("low temperature matches zero temperature") {
  const double d = 1e-6;
  const double t = kelvin_for(1e-3, d);
  for (const DielectricModel& m : {DielectricModel{PerfectMirror{}}, DielectricModel{ConstantEps{2.0}}}) {
    const LifshitzResult hot = pressure_finite_T({m, m, d, t});
    const LifshitzResult cold = pressure_zero_T({m, m, d});
    CHECK(hot.pressure_Pa == doctest::Approx(cold.pressure_Pa).epsilon(1e-5));
    CHECK(hot.quadrature.matsubara_terms > 100);
  }
}

TEST_CASE("classical limit") {
  const double d = 1e-6;
  const double t = kelvin_for(20.0, d);
  const double ideal_p = pressure_finite_T({PerfectMirror{}, PerfectMirror{}, d, t}).pressure_Pa;
  CHECK(ideal_p / classical(t, d) == doctest::Approx(1.0).epsilon(1e-2));
  const Drude drude{1.37e16, 5.32e13};
  const Plasma plasma{1.37e16};
  CHECK(pressure_finite_T({drude, drude, d, t}).pressure_Pa / classical(t, d) == doctest::Approx(0.5).epsilon(1e-2));
  // A plasma keeps a partial n = 0 TE reflection; it recovers the ideal
  // limit only as omega_p d / c grows.
  const double plasma_ratio = pressure_finite_T({plasma, plasma, d, t}).pressure_Pa / classical(t, d);
  CHECK(plasma_ratio > 0.5);
  CHECK(plasma_ratio < 1.0);
  const double wp_big = 1e3 * kConstants.c / d;
  CHECK(pressure_finite_T({Plasma{wp_big}, Plasma{wp_big}, d, t}).pressure_Pa / classical(t, d) ==
        doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("good plasma approaches the ideal mirror") {
  const double d = 1e3 * kConstants.c / 1e16;  // omega_p d / c = 1e3
  const double p = pressure_zero_T({Plasma{1e16}, Plasma{1e16}, d}).pressure_Pa;
  CHECK(p / ideal(d) == doctest::Approx(1.0).epsilon(2e-2));
  CHECK(p / ideal(d) < 1.0);
}

TEST_CASE("finite temperature free energy at high T") {
  const double d = 1e-6;
  const double t = kelvin_for(20.0, d);
  const double f = energy_per_area({PerfectMirror{}, PerfectMirror{}, d, t}).energy_per_area_Jm2;
  CHECK(f == doctest::Approx(-kZeta3 * kConstants.kB * t / (8 * kPi * d * d)).epsilon(1e-2));
}

TEST_CASE("deterministic") {
  const PlanarCavity c{Drude{1.37e16, 5.32e13}, ConstantEps{3.0}, 7e-7, 300.0};
  const LifshitzResult a = evaluate(c);
  const LifshitzResult b = evaluate(c);
  CHECK(a.pressure_Pa == b.pressure_Pa);
  CHECK(a.energy_per_area_Jm2 == b.energy_per_area_Jm2);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(pressure({PerfectMirror{}, PerfectMirror{}, 0.0}), DomainError);
  CHECK_THROWS_AS(pressure({PerfectMirror{}, PerfectMirror{}, 1e-6, -1.0}), DomainError);
  CHECK_THROWS_AS(pressure({PerfectMirror{}, PerfectMirror{}, 1e-6}, 0.0), DomainError);
  CHECK_THROWS_AS(pressure_zero_T({PerfectMirror{}, PerfectMirror{}, 1e-6, 300.0}), DomainError);
  CHECK_THROWS_AS(pressure_finite_T({PerfectMirror{}, PerfectMirror{}, 1e-6, 0.0}), DomainError);
  CHECK_THROWS_AS(pressure({ConstantEps{0.1}, PerfectMirror{}, 1e-6}), DomainError);
  // Far too many Matsubara terms.
  CHECK_THROWS_AS(pressure_finite_T({PerfectMirror{}, PerfectMirror{}, 1e-6, 1e-6}), ConvergenceError);
}
