#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace casimir::toy {

enum class Boundary { kPinned, kPeriodic };

/// Reservoir oscillator attached to a defect.
struct BathOscillator {
  double omega_rad_s;
  double coupling_rad_s;
};

/// Matter oscillator sitting on one lattice site.
struct Defect {
  std::size_t site;
  double omega_m_rad_s;
  double g_rad_s;
  std::vector<BathOscillator> reservoir{};
};

/// Scalar field on n_sites points with spacing a, plus defects.
///
/// Coordinate order in the quadratic form: field sites 0..N-1, then for each
/// defect its matter coordinate followed by its bath coordinates.
struct LatticeModel {
  std::size_t n_sites;
  double spacing_m;
  Boundary boundary = Boundary::kPinned;
  std::vector<Defect> defects{};
};

void validate(const LatticeModel& model);

/// Potential-energy matrix K (rad^2/s^2), H = sum p^2/2 + x^T K x / 2.
///
///   field chain      K_ii = 2 (c/a)^2, K_i,i+1 = -(c/a)^2
///   defect at s      K_ss += g c/a,  K_sq = -g c/a,  K_qq = omega_m^2
///   bath b of q      K_qb = -kappa_b c/a,  K_bb = omega_b^2
///
/// The defect couples through a spring between the field and matter
/// amplitudes, so a static defect pins the field with stiffness
/// g c/a - (g c/a)^2 / omega_m^2. Throws ModelInstabilityError if K is not
/// positive definite.
Eigen::MatrixXd build_quadratic_form(const LatticeModel& model);

struct SpectrumResult {
  std::vector<double> eigenfrequencies;  // rad/s, ascending
  double ground_energy_J;
  std::uint64_t model_hash;
};

SpectrumResult ground_energy(const LatticeModel& model);

/// FNV-1a over the canonical model description.
std::uint64_t model_hash(const LatticeModel& model);

/// A lattice with two identical defects whose separation is the free
/// parameter. The first defect sits at (N - d) / 2, the second d sites to
/// its right.
struct SeparationFamily {
  std::size_t n_sites;
  double spacing_m;
  Boundary boundary = Boundary::kPinned;
  Defect defect;  // site ignored
};

LatticeModel at_separation(const SeparationFamily& family, std::size_t d);

struct ToyForce {
  std::size_t d;
  double energy_d_J;
  double energy_d_plus_1_J;
  /// E(d+1) - E(d)
  double energy_difference_J;
  /// -(E(d+1) - E(d)) / a; negative is attraction.
  double force_N;
};

/// Throws DomainError if either defect is closer than d sites to an end.
ToyForce casimir_force_toy(const SeparationFamily& family, std::size_t d);

struct ScalingFit {
  /// s in |F| ~ A d^-s
  double exponent;
  double prefactor;
  /// rms residual of log|F|
  double log_residual;
  std::size_t points;
};

/// Least-squares slope of log|F| against log d. Needs >= 5 points of one sign.
ScalingFit scaling_exponent(std::span<const std::pair<double, double>> forces);

}  // namespace casimir::toy
