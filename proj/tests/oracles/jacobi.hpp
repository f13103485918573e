// Cyclic Jacobi eigenvalues for small dense symmetric matrices.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline std::vector<double> jacobi_eigenvalues(Dense a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-300) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Pinned chain of n sites with two spring-coupled defects, units c/a = 1,
// assembled entry by entry. Returns sum of normal-mode frequencies.
inline double chain_two_defects_frequency_sum(std::size_t n, std::size_t s1, std::size_t s2, double wm, double g) {
  Dense k(n + 2, std::vector<double>(n + 2, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    k[i][i] = 2.0;
    if (i + 1 < n) k[i][i + 1] = k[i + 1][i] = -1.0;
  }
  const std::size_t sites[2] = {s1, s2};
  for (std::size_t j = 0; j < 2; ++j) {
    const std::size_t s = sites[j];
    const std::size_t m = n + j;
    k[s][s] += g;
    k[s][m] = k[m][s] = -g;
    k[m][m] = wm * wm;
  }
  double sum = 0.0;
  for (double lambda : jacobi_eigenvalues(k)) sum += std::sqrt(lambda);
  return sum;
}

}  // namespace oracle
