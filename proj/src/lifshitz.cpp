#include "casimir/lifshitz.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"
#include "casimir/units.hpp"

namespace casimir::lifshitz {

namespace {

using boost::math::quadrature::gauss_kronrod;
using Rule = gauss_kronrod<double, 31>;

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Integrands decay as e^{-u}; u^3 e^{-u} < 1e-22 beyond this span.
constexpr double kUSpan = 64.0;
constexpr unsigned kOuterDepth = 22;
constexpr unsigned kInnerDepth = 16;
const std::string kConvention = "cavity-scattering-part (homogeneous-medium stress subtracted)";

struct Coefficients {
  double te;
  double tm;
};

// One side of the cavity in natural units (lengths in units of the gap).
class Mirror {
 public:
  Mirror(const DielectricModel& model, double gap_m) : model_(&model), xi_unit_(kConstants.c / gap_m) {
    validate(model);
    perfect_ = is_perfect_mirror(model);
    if (!perfect_) {
      const StaticResponse s = static_response(model);
      eps0_ = s.eps0;
      plasma_sq_ = s.plasma_wavenumber_sq * gap_m * gap_m;
    }
  }

  // xi_nat = xi d / c > 0, t = xi / (c kappa) in [0, 1].
  Coefficients at(double xi_nat, double t) const {
    if (perfect_) return {-1.0, 1.0};
    if (!(xi_nat > 0.0)) return at_zero_frequency(0.0);
    const double eps = eval_eps_imag(*model_, xi_nat * xi_unit_);
    return fresnel(eps, t);
  }

  // xi = 0, in-plane wavenumber k_nat = k d.
  Coefficients at_zero_frequency(double k_nat) const {
    if (perfect_) return {-1.0, 1.0};
    double te = 0.0;
    if (plasma_sq_ > 0.0) {
      const double root = std::sqrt(k_nat * k_nat + plasma_sq_);
      te = -plasma_sq_ / ((k_nat + root) * (k_nat + root));
    }
    const double tm = std::isinf(eps0_) ? 1.0 : (eps0_ - 1.0) / (eps0_ + 1.0);
    return {te, tm};
  }

  static Coefficients fresnel(double eps, double t) {
    // kappa_m / kappa = s = sqrt(1 + (eps - 1) t^2)
    const double excess = (eps - 1.0) * t * t;
    const double s = std::sqrt(1.0 + excess);
    const double te = -excess / ((1.0 + s) * (1.0 + s));
    const double tm = std::isinf(eps) ? 1.0 : (eps - s) / (eps + s);
    return {te, tm};
  }

 private:
  const DielectricModel* model_;
  double xi_unit_;
  bool perfect_ = false;
  double eps0_ = 1.0;
  double plasma_sq_ = 0.0;
};

enum class Observable { kPressure, kEnergy };

// Sum over polarizations of the round-trip kernel at u = 2 kappa d.
double round_trip(Observable obs, const Coefficients& l, const Coefficients& r, double u) {
  const double decay = std::exp(-u);
  const double x_te = l.te * r.te * decay;
  const double x_tm = l.tm * r.tm * decay;
  if (obs == Observable::kPressure) return x_te / (1.0 - x_te) + x_tm / (1.0 - x_tm);
  return std::log1p(-x_te) + std::log1p(-x_tm);
}

double relative(double err, double value) {
  if (value == 0.0) return err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return err / std::abs(value);
}

void check_cavity(const PlanarCavity& cavity) {
  if (!(cavity.gap_m > 0.0) || !std::isfinite(cavity.gap_m)) throw DomainError("gap must be positive");
  if (!(cavity.temperature_K >= 0.0) || !std::isfinite(cavity.temperature_K)) {
    throw DomainError("temperature must be >= 0");
  }
}

void check_tol(double tol) {
  if (!(tol > 0.0) || !(tol < 1.0)) throw DomainError("tolerance must lie in (0, 1)");
}

LifshitzResult empty_result() { return {kNaN, kNaN, {}, kConvention}; }

// Natural-unit integral over the quarter plane in (u, t) variables:
//   pressure: int_0^1 dt int_0^inf du u^3 K,   energy: ... u^2 log-kernel.
double zero_T_integral(Observable obs, const Mirror& left, const Mirror& right, double tol,
                       QuadratureDiagnostics& diag) {
  const int power = obs == Observable::kPressure ? 3 : 2;
  double worst_inner = 0.0;
  std::size_t evals = 0;
  auto inner = [&](double t) {
    auto f = [&](double u) {
      ++evals;
      const double xi = 0.5 * u * t;
      const Coefficients l = left.at(xi, t);
      const Coefficients r = right.at(xi, t);
      return std::pow(u, power) * round_trip(obs, l, r, u);
    };
    double err = 0.0;
    const double v = Rule::integrate(f, 0.0, kUSpan, kInnerDepth, tol / 10.0, &err);
    worst_inner = std::max(worst_inner, relative(err, v));
    return v;
  };
  double err = 0.0;
  const double value = Rule::integrate(inner, 0.0, 1.0, kOuterDepth, tol / 2.0, &err);
  diag.integrand_evaluations += evals;
  diag.rel_error_estimate = relative(err, value) + worst_inner;
  return value;
}

struct MatsubaraSum {
  double value;
  double rel_error;
  std::size_t terms;
  std::size_t evals;
};

// sum'_n int_{a_n}^inf du u^power K(u, t = a_n / u), a_n = 4 pi n tau.
MatsubaraSum matsubara_sum(Observable obs, const Mirror& left, const Mirror& right, double tau, double tol) {
  const int power = obs == Observable::kPressure ? 2 : 1;
  const double step = 4.0 * kPi * tau;
  const double first_decay = 1.0 - std::exp(-step);
  // Ideal-mirror majorant of one term starting at a: both kernels are bounded
  // by e^{-u} / (1 - e^{-a_1}).
  auto bound = [&](double a) {
    const double poly = power == 2 ? a * a + 2.0 * a + 2.0 : a + 1.0;
    return 2.0 * std::exp(-a) * poly / first_decay;
  };

  // Terms up to u ~ 20 are never negligible; fail early if they cannot fit.
  if (20.0 / step > static_cast<double>(kMaxMatsubaraTerms)) {
    throw ConvergenceError("temperature too low for the Matsubara sum (more than " +
                               std::to_string(kMaxMatsubaraTerms) + " terms); use the zero-temperature route",
                           kNaN, kNaN);
  }
  NeumaierSum sum;
  double abs_err = 0.0;
  std::size_t evals = 0;
  for (std::size_t n = 0;; ++n) {
    if (n >= kMaxMatsubaraTerms) {
      throw ConvergenceError(
          "Matsubara sum needs more than " + std::to_string(kMaxMatsubaraTerms) +
              " terms at this temperature; use the zero-temperature route",
          sum.value(), kNaN);
    }
    const double a = step * static_cast<double>(n);
    auto f = [&](double u) {
      ++evals;
      Coefficients l{};
      Coefficients r{};
      if (n == 0) {
        l = left.at_zero_frequency(0.5 * u);
        r = right.at_zero_frequency(0.5 * u);
      } else {
        const double t = a / u;
        l = left.at(0.5 * a, t);
        r = right.at(0.5 * a, t);
      }
      return std::pow(u, power) * round_trip(obs, l, r, u);
    };
    double err = 0.0;
    const double term = Rule::integrate(f, a, a + kUSpan, kInnerDepth, tol / 10.0, &err);
    const double weight = n == 0 ? 0.5 : 1.0;
    sum.add(weight * term);
    abs_err += weight * err;

    if (n == 0) continue;
    const double next = a + step;
    const double head = bound(next);
    if (head == 0.0) return {sum.value(), relative(abs_err, sum.value()), n + 1, evals};
    const double ratio = bound(next + step) / head;
    if (ratio < 1.0) {
      const double tail = head / (1.0 - ratio);
      if (tail < tol / 10.0 * std::abs(sum.value())) {
        return {sum.value(), relative(abs_err + tail, sum.value()), n + 1, evals};
      }
    }
  }
}

LifshitzResult zero_T(Observable obs, const PlanarCavity& cavity, double tol) {
  check_cavity(cavity);
  check_tol(tol);
  LifshitzResult res = empty_result();
  const double d = cavity.gap_m;
  const double unit = obs == Observable::kPressure ? kConstants.hbar_c() / std::pow(d, 4)
                                                   : kConstants.hbar_c() / std::pow(d, 3);
  double value = 0.0;
  if (!is_vacuum(cavity.left) && !is_vacuum(cavity.right)) {
    const Mirror left(cavity.left, d);
    const Mirror right(cavity.right, d);
    const double integral = zero_T_integral(obs, left, right, tol, res.quadrature);
    // P = -(hbar c / d^4) I / (32 pi^2),  E/A = (hbar c / d^3) I / (32 pi^2)
    value = (obs == Observable::kPressure ? -1.0 : 1.0) * unit * integral / (32.0 * kPi * kPi);
  }
  if (res.quadrature.rel_error_estimate > tol) {
    throw ConvergenceError("zero-temperature Lifshitz quadrature did not reach tolerance", value,
                           res.quadrature.rel_error_estimate);
  }
  (obs == Observable::kPressure ? res.pressure_Pa : res.energy_per_area_Jm2) = value;
  return res;
}

LifshitzResult finite_T(Observable obs, const PlanarCavity& cavity, double tol) {
  check_cavity(cavity);
  check_tol(tol);
  if (!(cavity.temperature_K > 0.0)) throw DomainError("finite-temperature route needs T > 0");
  LifshitzResult res = empty_result();
  const double d = cavity.gap_m;
  const double tau = kConstants.kB * cavity.temperature_K * d / kConstants.hbar_c();
  const double unit = obs == Observable::kPressure ? kConstants.hbar_c() / std::pow(d, 4)
                                                   : kConstants.hbar_c() / std::pow(d, 3);
  double value = 0.0;
  if (!is_vacuum(cavity.left) && !is_vacuum(cavity.right)) {
    const Mirror left(cavity.left, d);
    const Mirror right(cavity.right, d);
    const MatsubaraSum s = matsubara_sum(obs, left, right, tau, tol);
    // P = -(hbar c / d^4) (tau / 8 pi) S,  F/A = (hbar c / d^3) (tau / 8 pi) S
    value = (obs == Observable::kPressure ? -1.0 : 1.0) * unit * tau / (8.0 * kPi) * s.value;
    res.quadrature.integrand_evaluations = s.evals;
    res.quadrature.matsubara_terms = s.terms;
    res.quadrature.rel_error_estimate = s.rel_error;
  }
  if (res.quadrature.rel_error_estimate > tol) {
    throw ConvergenceError("Matsubara sum did not reach tolerance", value, res.quadrature.rel_error_estimate);
  }
  (obs == Observable::kPressure ? res.pressure_Pa : res.energy_per_area_Jm2) = value;
  return res;
}

}  // namespace

double reflection_coeff(const DielectricModel& model, double xi, double k, Polarization pol) {
  if (!(xi > 0.0) || !std::isfinite(xi)) throw DomainError("reflection coefficient needs xi > 0");
  if (!(k >= 0.0) || !std::isfinite(k)) throw DomainError("reflection coefficient needs k >= 0");
  Coefficients r{};
  if (is_perfect_mirror(model)) {
    r = {-1.0, 1.0};
  } else {
    const double eps = eval_eps_imag(model, xi);
    const double q = xi / kConstants.c;
    const double kappa = std::hypot(k, q);
    r = Mirror::fresnel(eps, q / kappa);
  }
  return pol == Polarization::kTE ? r.te : r.tm;
}

LifshitzResult pressure_zero_T(const PlanarCavity& cavity, double tol) {
  if (cavity.temperature_K != 0.0) throw DomainError("zero-temperature route needs T = 0");
  return zero_T(Observable::kPressure, cavity, tol);
}

LifshitzResult pressure_finite_T(const PlanarCavity& cavity, double tol) {
  return finite_T(Observable::kPressure, cavity, tol);
}

LifshitzResult energy_per_area(const PlanarCavity& cavity, double tol) {
  return cavity.temperature_K > 0.0 ? finite_T(Observable::kEnergy, cavity, tol)
                                    : zero_T(Observable::kEnergy, cavity, tol);
}

LifshitzResult pressure(const PlanarCavity& cavity, double tol) {
  return cavity.temperature_K > 0.0 ? pressure_finite_T(cavity, tol) : pressure_zero_T(cavity, tol);
}

LifshitzResult evaluate(const PlanarCavity& cavity, double tol) {
  LifshitzResult p = pressure(cavity, tol);
  const LifshitzResult e = energy_per_area(cavity, tol);
  p.energy_per_area_Jm2 = e.energy_per_area_Jm2;
  p.quadrature.integrand_evaluations += e.quadrature.integrand_evaluations;
  p.quadrature.matsubara_terms = std::max(p.quadrature.matsubara_terms, e.quadrature.matsubara_terms);
  p.quadrature.rel_error_estimate = std::max(p.quadrature.rel_error_estimate, e.quadrature.rel_error_estimate);
  return p;
}

}  // namespace casimir::lifshitz
