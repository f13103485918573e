#include "casimir/modesum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"
#include "casimir/units.hpp"

namespace casimir::modesum {

namespace {

using Wide = boost::multiprecision::cpp_bin_float_quad;

constexpr double kPi = std::numbers::pi;
constexpr int kLadderRungs = 10;
constexpr double kLadderRatio = 2.0;
constexpr double kMinCutoffOverGap = 1e-2;
constexpr double kMaxCutoffOverGap = 1.0;
constexpr double kDropNatural = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Everything below works in natural units: hbar = c = 1, lengths in units
// of the gap. A ModeFamily describes
//   E = zero_weight * G(0) + positive_weight * sum_{n>=1} G(n)
// for one geometry, where G(n) is the (k_parallel-integrated) zero-point
// energy of the modes with index n.
struct ModeFamily {
  Geometry geometry;
  double zero_weight;
  double positive_weight;
  // G'(n) at vanishing cutoff as a polynomial in n (coefficients of n^0, n^1, ...).
  std::vector<double> derivative_poly;
  // Under zeta continuation G(n) -> zeta_coeff * n^zeta_power.
  double zeta_coeff;
  int zeta_power;
  // With cutoff exp(-xi omega): int_0^inf G dn = bulk_coeff / xi^bulk_power and
  // G(0) = surface_coeff / xi^surface_power.
  double bulk_coeff;
  int bulk_power;
  double surface_coeff;
  int surface_power;
  // SI conversion: energy unit hbar c / d^energy_dim.
  int energy_dim;
};

ModeFamily scalar_family() {
  // omega_n = n pi, G(n) = (1/2) n pi.
  return ModeFamily{Geometry::kScalar1d,
                    0.0,
                    1.0,
                    {kPi / 2.0},
                    kPi / 2.0,
                    1,
                    1.0 / (2.0 * kPi),
                    2,
                    0.0,
                    1,
                    1};
}

ModeFamily em_family(ZeroModeCounting zero_modes) {
  // Per polarization G(n) = (1/2) int d^2k/(2 pi)^2 sqrt(k^2 + q_n^2),
  // q_n = n pi; with the cutoff this is (1/4 pi) int_{q_n}^inf kappa^2 e^{-xi kappa}.
  // Dimensional continuation of the k integral gives -q^3 / (12 pi).
  const double zero_weight = zero_modes == ZeroModeCounting::kBothPolarizations ? 2.0 : 1.0;
  return ModeFamily{Geometry::kEm3d,
                    zero_weight,
                    2.0,
                    {0.0, 0.0, -kPi * kPi / 4.0},
                    -kPi * kPi / 12.0,
                    3,
                    6.0 / (4.0 * kPi * kPi),
                    4,
                    2.0 / (4.0 * kPi),
                    3,
                    3};
}

// Summand with the exponential cutoff, natural units.
Wide regulated_term(Geometry g, long n, const Wide& xi, const Wide& damping) {
  const Wide pi = boost::math::constants::pi<Wide>();
  if (g == Geometry::kScalar1d) return pi / 2 * n * damping;
  const Wide q = pi * n;
  return damping / (4 * pi) * (q * q / xi + 2 * q / (xi * xi) + 2 / (xi * xi * xi));
}

Wide regulated_sum(const ModeFamily& fam, const Wide& xi, std::size_t& terms) {
  const Wide pi = boost::math::constants::pi<Wide>();
  const Wide ratio = exp(-pi * xi);
  BasicNeumaierSum<Wide> sum;
  if (fam.zero_weight != 0.0) sum.add(fam.zero_weight * regulated_term(fam.geometry, 0, xi, Wide(1)));
  Wide damping = ratio;
  const Wide stop = Wide("1e-36");
  // The terms rise until n ~ 1/(pi xi) and then decay geometrically.
  const long peak = static_cast<long>(2.0 / (kPi * static_cast<double>(xi))) + 2;
  for (long n = 1;; ++n) {
    const Wide term = fam.positive_weight * regulated_term(fam.geometry, n, xi, damping);
    sum.add(term);
    ++terms;
    if (n > peak && term < stop * abs(sum.value())) break;
    damping *= ratio;
  }
  return sum.value();
}

std::vector<double> derivative_at_zero(const std::vector<double>& poly, int max_order) {
  // poly holds G'(n); returns G^(j)(0) for j = 0..max_order (G(0) unused).
  std::vector<double> d(static_cast<std::size_t>(max_order) + 1, 0.0);
  for (int j = 1; j <= max_order; ++j) {
    const int k = j - 1;  // derivative order of G'
    if (k < static_cast<int>(poly.size())) {
      double fact = 1.0;
      for (int i = 2; i <= k; ++i) fact *= i;
      d[j] = poly[k] * fact;
    }
  }
  return d;
}

double si_energy_unit(const ModeFamily& fam, double gap_m) {
  return kConstants.hbar_c() / std::pow(gap_m, fam.energy_dim);
}

// c_p xi^-p with xi in metres: c_p = hbar c d^(p - energy_dim) c~_p.
double si_divergence(const ModeFamily& fam, double gap_m, int p, double natural) {
  return kConstants.hbar_c() * std::pow(gap_m, p - fam.energy_dim) * natural;
}

void check_gap(double gap_m) {
  if (!(gap_m > 0.0) || !std::isfinite(gap_m)) throw DomainError("gap must be positive and finite");
}

ModeSumResult zeta_result(const ModeFamily& fam, double gap_m) {
  ModeSumResult r;
  r.gap_m = gap_m;
  r.geometry = fam.geometry;
  r.regulator = ZetaAbel{};
  // G(0) vanishes under continuation (q = 0); sum_{n>=1} n^m -> zeta(-m).
  r.finite_part = si_energy_unit(fam, gap_m) * fam.positive_weight * fam.zeta_coeff *
                  zeta_at_negative_integer(fam.zeta_power);
  return r;
}

ModeSumResult euler_maclaurin_result(const ModeFamily& fam, double gap_m, int order) {
  // sum_{n>=1} G(n) = int_0^inf G - G(0)/2 - sum_k B_2k/(2k)! G^(2k-1)(0) + R.
  const auto bern = bernoulli_numbers(2 * order);
  const auto deriv = derivative_at_zero(fam.derivative_poly, 2 * order - 1);
  NeumaierSum boundary;
  double fact = 1.0;
  for (int k = 1; k <= order; ++k) {
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    boundary.add(-bern[2 * k] / fact * deriv[2 * k - 1]);
  }
  ModeSumResult r;
  r.gap_m = gap_m;
  r.geometry = fam.geometry;
  r.regulator = EulerMaclaurin{order};
  r.finite_part = si_energy_unit(fam, gap_m) * fam.positive_weight * boundary.value();
  r.divergences[fam.bulk_power] = si_divergence(fam, gap_m, fam.bulk_power, fam.positive_weight * fam.bulk_coeff);
  const double surface = (fam.zero_weight - fam.positive_weight / 2.0) * fam.surface_coeff;
  if (std::abs(surface) > kDropNatural) {
    r.divergences[fam.surface_power] = si_divergence(fam, gap_m, fam.surface_power, surface);
  }
  return r;
}

ModeSumResult cutoff_result(const ModeFamily& fam, double gap_m, double xi_reg_m) {
  const double top = xi_reg_m / gap_m;
  if (!(top >= kMinCutoffOverGap && top <= kMaxCutoffOverGap)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "cutoff/gap ratio %.3g outside the supported ladder range [%g, %g]", top,
                  kMinCutoffOverGap, kMaxCutoffOverGap);
    throw DomainError(buf);
  }
  // Richardson on a ratio-2 ladder. Known structure: divergent powers
  // {4,3,2,1}, constant, and corrections analytic in xi^2.
  std::vector<int> powers{4, 3, 2, 1, 0};
  for (int k = 1; static_cast<int>(powers.size()) < kLadderRungs; ++k) powers.push_back(-2 * k);

  std::vector<std::vector<Wide>> a;
  std::vector<Wide> y;
  std::vector<Wide> col_scale(powers.size(), Wide(0));
  std::size_t terms = 0;
  Wide xi = Wide(top);
  for (int k = 0; k < kLadderRungs; ++k) {
    y.push_back(regulated_sum(fam, xi, terms));
    std::vector<Wide> row;
    for (std::size_t j = 0; j < powers.size(); ++j) {
      row.push_back(pow(xi, -powers[j]));
      col_scale[j] = std::max(col_scale[j], abs(row.back()));
    }
    a.push_back(std::move(row));
    xi /= Wide(kLadderRatio);
  }
  for (auto& row : a) {
    for (std::size_t j = 0; j < row.size(); ++j) row[j] /= col_scale[j];
  }
  Eigen::MatrixXd scaled(a.size(), powers.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < powers.size(); ++j) scaled(i, j) = static_cast<double>(a[i][j]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
  const auto sv = svd.singularValues();
  const auto coeffs = solve_dense(a, y);
  // One order lower on the coarser rungs, for an error estimate.
  const std::size_t lower = powers.size() - 1;
  std::vector<std::vector<Wide>> a_low(a.begin(), a.begin() + lower);
  for (auto& row : a_low) row.resize(lower);
  const auto coeffs_low = solve_dense(a_low, std::vector<Wide>(y.begin(), y.begin() + lower));
  const std::size_t finite_col = 4;
  const Wide finite_hi = coeffs[finite_col] / col_scale[finite_col];
  const Wide finite_lo = coeffs_low[finite_col] / col_scale[finite_col];

  ModeSumResult r;
  r.gap_m = gap_m;
  r.geometry = fam.geometry;
  r.regulator = ExpCutoff{xi_reg_m};
  r.ladder.rungs = kLadderRungs;
  r.ladder.xi_max_m = xi_reg_m;
  r.ladder.xi_min_m = xi_reg_m / std::pow(kLadderRatio, kLadderRungs - 1);
  r.ladder.condition_number = sv(0) / sv(sv.size() - 1);
  r.ladder.terms_summed = terms;
  r.ladder.finite_part_rel_error =
      finite_hi == 0 ? 0.0 : static_cast<double>(abs((finite_hi - finite_lo) / finite_hi));
  for (std::size_t j = 0; j < powers.size(); ++j) {
    const double c = static_cast<double>(coeffs[j] / col_scale[j]);
    if (powers[j] == 0) {
      r.finite_part = si_energy_unit(fam, gap_m) * c;
    } else if (powers[j] > 0 && std::abs(c) > kDropNatural) {
      r.divergences[powers[j]] = si_divergence(fam, gap_m, powers[j], c);
    }
  }
  return r;
}

ModeSumResult energy(const ModeFamily& fam, double gap_m, const Regulator& reg) {
  check_gap(gap_m);
  validate(reg);
  return std::visit(Overloaded{
                        [&](const ZetaAbel&) { return zeta_result(fam, gap_m); },
                        [&](const EulerMaclaurin& em) { return euler_maclaurin_result(fam, gap_m, em.order); },
                        [&](const ExpCutoff& ec) { return cutoff_result(fam, gap_m, ec.xi_reg_m); },
                    },
                    reg);
}

ModeSumResult bulk(const ModeFamily& fam, double gap_m, const Regulator& reg) {
  check_gap(gap_m);
  validate(reg);
  ModeSumResult r;
  r.gap_m = gap_m;
  r.geometry = fam.geometry;
  r.regulator = reg;
  if (!std::holds_alternative<ZetaAbel>(reg)) {
    // Free space: the mode index becomes continuous, sum -> integral.
    r.divergences[fam.bulk_power] =
        si_divergence(fam, gap_m, fam.bulk_power, fam.positive_weight * fam.bulk_coeff);
  }
  return r;
}

bool same_regulator(const Regulator& a, const Regulator& b) {
  if (a.index() != b.index()) return false;
  if (const auto* ea = std::get_if<ExpCutoff>(&a)) return ea->xi_reg_m == std::get<ExpCutoff>(b).xi_reg_m;
  if (const auto* ma = std::get_if<EulerMaclaurin>(&a)) return ma->order == std::get<EulerMaclaurin>(b).order;
  return true;
}

}  // namespace

std::string describe(const Regulator& reg) {
  return std::visit(Overloaded{
                        [](const ZetaAbel&) { return std::string("zeta"); },
                        [](const EulerMaclaurin& em) {
                          return "euler_maclaurin(order=" + std::to_string(em.order) + ")";
                        },
                        [](const ExpCutoff& ec) {
                          char buf[64];
                          std::snprintf(buf, sizeof buf, "expcutoff(xi_m=%.17g)", ec.xi_reg_m);
                          return std::string(buf);
                        },
                    },
                    reg);
}

void validate(const Regulator& reg) {
  if (const auto* ec = std::get_if<ExpCutoff>(&reg)) {
    if (!(ec->xi_reg_m > 0.0) || !std::isfinite(ec->xi_reg_m)) {
      throw DomainError("cutoff length must be positive");
    }
  }
  if (const auto* em = std::get_if<EulerMaclaurin>(&reg)) {
    if (em->order < 2 || em->order > 40) throw DomainError("Euler-Maclaurin order must be in [2, 40]");
  }
}

std::string to_string(Geometry g) { return g == Geometry::kScalar1d ? "scalar1d" : "em3d"; }

ModeSumResult scalar1d_energy(double gap_m, const Regulator& reg) { return energy(scalar_family(), gap_m, reg); }

ModeSumResult em3d_energy_per_area(double gap_m, const Regulator& reg, ZeroModeCounting zero_modes) {
  return energy(em_family(zero_modes), gap_m, reg);
}

ModeSumResult scalar1d_bulk(double gap_m, const Regulator& reg) { return bulk(scalar_family(), gap_m, reg); }

ModeSumResult em3d_bulk(double gap_m, const Regulator& reg) {
  return bulk(em_family(ZeroModeCounting::kBothPolarizations), gap_m, reg);
}

ModeSumResult background_subtract(const ModeSumResult& result, const ModeSumResult& background, double rel_drop) {
  if (!same_regulator(result.regulator, background.regulator)) {
    throw DomainError("background subtraction with mismatched regulators: " + describe(result.regulator) +
                      " vs " + describe(background.regulator));
  }
  if (result.geometry != background.geometry) throw DomainError("background subtraction across geometries");
  ModeSumResult out = result;
  out.finite_part = result.finite_part - background.finite_part;
  out.divergences.clear();
  std::map<int, double> keys = result.divergences;
  for (const auto& [p, c] : background.divergences) keys.emplace(p, 0.0);
  for (const auto& [p, unused] : keys) {
    const auto ia = result.divergences.find(p);
    const auto ib = background.divergences.find(p);
    const double a = ia == result.divergences.end() ? 0.0 : ia->second;
    const double b = ib == background.divergences.end() ? 0.0 : ib->second;
    const double diff = a - b;
    if (std::abs(diff) > rel_drop * std::max(std::abs(a), std::abs(b))) out.divergences[p] = diff;
  }
  return out;
}

double scalar1d_force(double gap_m) {
  // E = C / d, so -dE/dd = E / d.
  return scalar1d_energy(gap_m, ZetaAbel{}).finite_part / gap_m;
}

double em3d_pressure(double gap_m) {
  // E/A = C / d^3, so -d(E/A)/dd = 3 (E/A) / d.
  return 3.0 * em3d_energy_per_area(gap_m, ZetaAbel{}).finite_part / gap_m;
}

double regulated_energy(Geometry geometry, double gap_m, double xi_reg_m, ZeroModeCounting zero_modes) {
  check_gap(gap_m);
  if (!(xi_reg_m > 0.0)) throw DomainError("cutoff length must be positive");
  const ModeFamily fam = geometry == Geometry::kScalar1d ? scalar_family() : em_family(zero_modes);
  std::size_t terms = 0;
  const Wide value = regulated_sum(fam, Wide(xi_reg_m / gap_m), terms);
  return si_energy_unit(fam, gap_m) * static_cast<double>(value);
}

DivergenceFit extract_divergences(std::span<const RegulatedSample> samples, const FitOptions& options) {
  if (samples.size() < 5) throw DomainError("divergence fit needs at least 5 samples");
  double lo = samples.front().xi_reg;
  double hi = lo;
  for (const auto& s : samples) {
    if (!(s.xi_reg > 0.0) || !std::isfinite(s.energy)) throw DomainError("invalid regulated sample");
    lo = std::min(lo, s.xi_reg);
    hi = std::max(hi, s.xi_reg);
  }
  if (hi < 10.0 * lo) throw DomainError("samples must span at least one decade of the cutoff");
  for (int p : options.powers) {
    if (p > 4 || p < 0) throw IllConditionedFitError("fit power outside {0..4} rejected", std::numeric_limits<double>::infinity());
  }
  for (int p : options.correction_powers) {
    if (p >= 0) throw DomainError("correction powers must be negative");
  }
  std::vector<int> powers = options.powers;
  powers.insert(powers.end(), options.correction_powers.begin(), options.correction_powers.end());
  if (samples.size() < powers.size()) throw DomainError("fewer samples than fit parameters");

  // Columns in units of the geometric-mean cutoff, then unit-normalized.
  const double xi0 = std::sqrt(lo * hi);
  const auto rows = static_cast<Eigen::Index>(samples.size());
  const auto cols = static_cast<Eigen::Index>(powers.size());
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd y(rows);
  double ymax = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double x = samples[i].xi_reg / xi0;
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = std::pow(x, -powers[j]);
    y(i) = samples[i].energy;
    ymax = std::max(ymax, std::abs(y(i)));
  }
  Eigen::VectorXd norms = a.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < cols; ++j) a.col(j) /= norms(j);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto sv = svd.singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  if (!(cond <= options.max_condition)) {
    throw IllConditionedFitError("divergence fit is ill-conditioned", cond);
  }
  const Eigen::VectorXd x = svd.solve(y);
  const double residual = (a * x - y).norm() / std::sqrt(static_cast<double>(rows));

  DivergenceFit fit;
  fit.condition_number = cond;
  fit.rel_residual = ymax > 0.0 ? residual / ymax : residual;
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double c = x(j) / norms(j) * std::pow(xi0, powers[j]);
    if (powers[j] > 0) {
      fit.divergences[powers[j]] = c;
    } else if (powers[j] == 0) {
      fit.finite_part = c;
    } else {
      fit.corrections[powers[j]] = c;
    }
  }
  if (fit.rel_residual > options.max_rel_residual) {
    throw ConvergenceError("divergence fit residual above threshold", fit.finite_part, fit.rel_residual);
  }
  return fit;
}

}  // namespace casimir::modesum
