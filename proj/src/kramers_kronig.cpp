#include "casimir/kramers_kronig.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"

namespace casimir {

namespace {

// int_a^b (g_a (b - w) + g_b (w - a)) / h / (w^2 + xi^2) dw with h = b - a,
// i.e. the exact integral of the linear interpolant of g = omega Im eps.
double segment_integral(double a, double b, double ga, double gb, double xi) {
  const double h = b - a;
  // int 1/(w^2+xi^2) and int w/(w^2+xi^2) over [a, b], written to avoid
  // cancellation for short segments.
  const double kernel0 = std::atan2(xi * h, xi * xi + a * b) / xi;
  const double kernel1 = 0.5 * std::log1p(h * (a + b) / (a * a + xi * xi));
  return (ga * (b * kernel0 - kernel1) + gb * (kernel1 - a * kernel0)) / h;
}

// (1 - atan(t)/t) / t^2
double tail_shape(double t) {
  if (t < 1e-2) {
    const double t2 = t * t;
    return 1.0 / 3.0 - t2 * (1.0 / 5.0 - t2 * (1.0 / 7.0 - t2 / 9.0));
  }
  return (1.0 - std::atan(t) / t) / (t * t);
}

double outside_grid(const OpticalTable& table, double xi) {
  const auto& w = table.omega();
  const auto& im = table.im_eps();
  const double w0 = w.front();
  const double g0 = w0 * im.front();
  double low = 0.0;
  switch (table.options().low) {
    case LowFrequencyExtension::kConducting:
      low = g0 * std::atan2(w0, xi) / xi;
      break;
    case LowFrequencyExtension::kInsulating:
      // g = g0 (w/w0)^2 on [0, w0]
      low = g0 / (w0 * w0) * (w0 - xi * std::atan2(w0, xi));
      break;
  }
  double high = 0.0;
  if (table.options().tail == HighFrequencyTail::kPowerLaw3) {
    // Im eps = Im eps_N (w_N / w)^3, so g = g_N (w_N / w)^2.
    const double wn = w.back();
    const double gn = wn * im.back();
    high = gn / wn * tail_shape(xi / wn);
  }
  return low + high;
}

double grid_integral(const OpticalTable& table, double xi, std::size_t stride) {
  const auto& w = table.omega();
  const auto& im = table.im_eps();
  const std::size_t n = w.size();
  NeumaierSum sum;
  std::size_t i = 0;
  while (i + 1 < n) {
    const std::size_t j = std::min(i + stride, n - 1);
    sum.add(segment_integral(w[i], w[j], w[i] * im[i], w[j] * im[j], xi));
    i = j;
  }
  return sum.value();
}

}  // namespace

KramersKronigResult kramers_kronig_to_imag(const OpticalTable& table, double xi) {
  if (!(xi > 0.0) || !std::isfinite(xi)) throw DomainError("Kramers-Kronig needs xi > 0");
  const double outside = outside_grid(table, xi);
  const double fine = grid_integral(table, xi, 1);
  const double coarse = grid_integral(table, xi, 2);
  constexpr double two_over_pi = 2.0 / std::numbers::pi;
  const double value = 1.0 + two_over_pi * (fine + outside);
  // Linear interpolation error scales as h^2.
  const double error = two_over_pi * std::abs(fine - coarse) / 3.0;
  if (error > table.options().rel_tol * value) {
    throw ConvergenceError("optical data grid too sparse for Kramers-Kronig tolerance", value, error);
  }
  return {value, error};
}

double kramers_kronig_static(const OpticalTable& table) {
  const auto& w = table.omega();
  const auto& im = table.im_eps();
  const double g0 = w.front() * im.front();
  if (table.options().low == LowFrequencyExtension::kConducting && g0 > 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  NeumaierSum sum;
  if (table.options().low == LowFrequencyExtension::kInsulating) sum.add(g0 / w.front());
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    // linear g over [a, b] against 1/w^2
    const double a = w[i];
    const double b = w[i + 1];
    const double ga = a * im[i];
    const double gb = b * im[i + 1];
    const double slope = (gb - ga) / (b - a);
    const double intercept = ga - slope * a;
    sum.add(intercept * (1.0 / a - 1.0 / b) + slope * std::log(b / a));
  }
  if (table.options().tail == HighFrequencyTail::kPowerLaw3) sum.add(im.back() / 3.0);
  return 1.0 + 2.0 / std::numbers::pi * sum.value();
}

}  // namespace casimir
