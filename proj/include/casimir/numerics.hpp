#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "casimir/errors.hpp"

namespace casimir {

/// Compensated (Neumaier) summation. Order of add() calls fixes the result.
template <class Real = double>
class BasicNeumaierSum {
 public:
  void add(Real x) {
    const Real t = sum_ + x;
    using std::abs;
    if (abs(sum_) >= abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Real value() const { return sum_ + comp_; }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
};

using NeumaierSum = BasicNeumaierSum<double>;

/// B_0 .. B_n with the convention B_1 = -1/2.
std::vector<double> bernoulli_numbers(int n);

/// Analytically continued zeta(-m) = (-1)^m B_{m+1} / (m + 1), m >= 0.
double zeta_at_negative_integer(int m);

/// Dense square solve by Gaussian elimination with partial pivoting.
/// Templated so mode-sum extrapolation can run in extended precision.
template <class Real>
std::vector<Real> solve_dense(std::vector<std::vector<Real>> a, std::vector<Real> b) {
  using std::abs;
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (abs(a[r][col]) > abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == Real(0)) throw DomainError("singular linear system");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Real f = a[r][col] / a[col][col];
      if (f == Real(0)) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Real> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Real s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace casimir
