#pragma once

#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace casimir::modesum {

/// Exponential frequency cutoff exp(-xi omega / c). The finite part is
/// extracted from a ratio-2 ladder xi_reg, xi_reg/2, ... of regulated sums.
struct ExpCutoff {
  double xi_reg_m;
};
/// Analytic continuation of the mode sum (zeta / Abel summation).
struct ZetaAbel {};
/// Euler-Maclaurin expansion of the cutoff sum, keeping `order` Bernoulli
/// correction terms.
struct EulerMaclaurin {
  int order;
};

using Regulator = std::variant<ExpCutoff, ZetaAbel, EulerMaclaurin>;

std::string describe(const Regulator& reg);
void validate(const Regulator& reg);

enum class Geometry {
  kScalar1d,  // Dirichlet scalar on an interval, energy in J
  kEm3d,      // EM field between ideal plates, energy per area in J/m^2
};

std::string to_string(Geometry g);

/// How many polarizations carry the k_z = 0 (parallel-running) modes. Both
/// polarizations are summed for every k_z; the default counts each
/// polarization's k_z = 0 mode once. kTmOnly drops the TE k_z = 0 mode,
/// whose field vanishes identically between ideal conductors.
enum class ZeroModeCounting {
  kBothPolarizations,
  kTmOnly,
};

struct LadderDiagnostics {
  std::size_t rungs = 0;
  double xi_min_m = 0.0;
  double xi_max_m = 0.0;
  double condition_number = 0.0;
  std::size_t terms_summed = 0;
  /// |change of the finite part| when the extrapolation drops one order.
  double finite_part_rel_error = 0.0;
};

/// Decomposition of a regulated mode sum:
/// E(xi_reg) ~ sum_p divergences[p] * xi_reg^-p + finite_part + o(1).
/// Coefficients are SI with xi_reg in metres.
struct ModeSumResult {
  double gap_m = 0.0;
  Geometry geometry = Geometry::kScalar1d;
  Regulator regulator = ZetaAbel{};
  double finite_part = 0.0;
  std::map<int, double> divergences;
  LadderDiagnostics ladder;
};

/// Zero-point energy of a Dirichlet scalar on [0, d], modes omega_n = n pi c / d.
ModeSumResult scalar1d_energy(double gap_m, const Regulator& reg);

/// Zero-point energy per area between ideal plates at separation d.
ModeSumResult em3d_energy_per_area(double gap_m, const Regulator& reg,
                                   ZeroModeCounting zero_modes = ZeroModeCounting::kBothPolarizations);

/// The free-space energy of the same volume under the same regulator, i.e.
/// the background of the renormalized energy. Pure divergence map.
ModeSumResult scalar1d_bulk(double gap_m, const Regulator& reg);
ModeSumResult em3d_bulk(double gap_m, const Regulator& reg);

/// result - background, entrywise; entries whose difference is below
/// rel_drop times the larger input magnitude are removed.
ModeSumResult background_subtract(const ModeSumResult& result, const ModeSumResult& background,
                                  double rel_drop = 1e-9);

/// -dE/dd for the scalar interval (force, N).
double scalar1d_force(double gap_m);

/// -d(E/A)/dd for ideal plates (Pa). Negative means attraction.
double em3d_pressure(double gap_m);

/// Raw regulated sum at a single cutoff, in SI.
double regulated_energy(Geometry geometry, double gap_m, double xi_reg_m,
                        ZeroModeCounting zero_modes = ZeroModeCounting::kBothPolarizations);

struct RegulatedSample {
  double xi_reg;
  double energy;
};

struct FitOptions {
  std::vector<int> powers{4, 3, 2, 1, 0};
  /// Extra powers for the vanishing corrections, e.g. {-2, -4}; must be < 0.
  std::vector<int> correction_powers{};
  double max_condition = 1e12;
  /// Allowed rms residual relative to max |energy|.
  double max_rel_residual = 1e-9;
};

struct DivergenceFit {
  std::map<int, double> divergences;  // p > 0
  double finite_part = 0.0;
  std::map<int, double> corrections;  // p < 0
  double rel_residual = 0.0;
  double condition_number = 0.0;
};

/// Least-squares fit of sum_p c_p xi^-p to samples from one geometry.
/// Needs >= 5 samples spanning at least a decade in xi.
DivergenceFit extract_divergences(std::span<const RegulatedSample> samples, const FitOptions& options = {});

}  // namespace casimir::modesum
