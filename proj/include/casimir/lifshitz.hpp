#pragma once

#include <cstddef>
#include <string>

#include "casimir/dielectric.hpp"

namespace casimir::lifshitz {

enum class Polarization { kTE, kTM };

/// Fresnel coefficient of a vacuum/medium interface at imaginary frequency
/// xi (rad/s) and in-plane wavenumber k (1/m). Real, |r| <= 1 for passive
/// media. PerfectMirror gives -1 (TE) and +1 (TM).
double reflection_coeff(const DielectricModel& model, double xi, double k, Polarization pol);

/// Two half-spaces separated by a vacuum gap.
struct PlanarCavity {
  DielectricModel left;
  DielectricModel right;
  double gap_m;
  double temperature_K = 0.0;
};

struct QuadratureDiagnostics {
  std::size_t integrand_evaluations = 0;
  /// Matsubara terms summed (0 for the zero-temperature integral).
  std::size_t matsubara_terms = 0;
  /// Estimated relative error of the returned value.
  double rel_error_estimate = 0.0;
};

struct LifshitzResult {
  /// Pa; negative means attraction. NaN when not requested.
  double pressure_Pa;
  /// J/m^2. NaN when not requested.
  double energy_per_area_Jm2;
  QuadratureDiagnostics quadrature;
  /// Which stress was evaluated: the cavity (scattering) part that remains
  /// after the homogeneous-medium stress has been subtracted.
  std::string stress_convention;
};

/// Zero-temperature pressure, integrated over imaginary frequency.
LifshitzResult pressure_zero_T(const PlanarCavity& cavity, double tol = 1e-6);

/// Matsubara sum at temperature T > 0.
LifshitzResult pressure_finite_T(const PlanarCavity& cavity, double tol = 1e-6);

/// Energy (free energy at T > 0) per area; dispatches on temperature.
LifshitzResult energy_per_area(const PlanarCavity& cavity, double tol = 1e-6);

/// Pressure; dispatches on temperature.
LifshitzResult pressure(const PlanarCavity& cavity, double tol = 1e-6);

/// Pressure and energy in one result.
LifshitzResult evaluate(const PlanarCavity& cavity, double tol = 1e-6);

/// Upper bound on Matsubara terms before the finite-T route gives up.
inline constexpr std::size_t kMaxMatsubaraTerms = 200000;

}  // namespace casimir::lifshitz
