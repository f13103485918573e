// Brute-force Lifshitz pressure in natural units (hbar = c = 1, d = 1):
//   P = -(1/2 pi^2) int_0^X dxi int_0^K dk  k kappa sum_pol [e^{2 kappa} / (rL rR) - 1]^-1
// with kappa = sqrt(k^2 + xi^2), plain trapezoid on a uniform Cartesian grid.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

// eps(xi) in natural units; nullptr-like sentinel: return INFINITY for an ideal mirror.
using Permittivity = std::function<double(double)>;

inline double fresnel_te(double eps, double xi, double k) {
  if (std::isinf(eps)) return -1.0;
  const double kappa = std::sqrt(k * k + xi * xi);
  const double km = std::sqrt(k * k + eps * xi * xi);
  return (kappa - km) / (kappa + km);
}

inline double fresnel_tm(double eps, double xi, double k) {
  if (std::isinf(eps)) return 1.0;
  const double kappa = std::sqrt(k * k + xi * xi);
  const double km = std::sqrt(k * k + eps * xi * xi);
  return (eps * kappa - km) / (eps * kappa + km);
}

inline double cartesian_pressure(const Permittivity& eps_l, const Permittivity& eps_r, double h = 4e-3,
                                 double extent = 22.0) {
  const int n = static_cast<int>(extent / h);
  double total = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double xi = i * h;
    const double wi = (i == 0 || i == n) ? 0.5 : 1.0;
    const double el = xi > 0 ? eps_l(xi) : 0.0;
    const double er = xi > 0 ? eps_r(xi) : 0.0;
    for (int j = 1; j <= n; ++j) {  // k = 0 contributes nothing
      const double k = j * h;
      const double wj = j == n ? 0.5 : 1.0;
      const double kappa = std::sqrt(k * k + xi * xi);
      double s = 0.0;
      if (xi > 0) {
        const double rte = fresnel_te(el, xi, k) * fresnel_te(er, xi, k);
        const double rtm = fresnel_tm(el, xi, k) * fresnel_tm(er, xi, k);
        const double e2 = std::exp(-2.0 * kappa);
        s = rte * e2 / (1.0 - rte * e2) + rtm * e2 / (1.0 - rtm * e2);
      }
      total += wi * wj * k * kappa * s;
    }
  }
  return -total * h * h / (2.0 * std::numbers::pi * std::numbers::pi);
}

}  // namespace oracle
