#include "casimir/numerics.hpp"

namespace casimir {

std::vector<double> bernoulli_numbers(int n) {
  if (n < 0) throw DomainError("bernoulli_numbers: negative order");
  // sum_{k=0}^{m} C(m+1, k) B_k = 0 for m >= 1, in long double.
  std::vector<long double> b(static_cast<std::size_t>(n) + 1, 0.0L);
  b[0] = 1.0L;
  for (int m = 1; m <= n; ++m) {
    long double binom = 1.0L;  // C(m+1, 0)
    long double acc = 0.0L;
    for (int k = 0; k < m; ++k) {
      acc += binom * b[k];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    b[m] = -acc / (m + 1);
    if (m >= 3 && m % 2 == 1) b[m] = 0.0L;
  }
  return {b.begin(), b.end()};
}

double zeta_at_negative_integer(int m) {
  if (m < 0) throw DomainError("zeta_at_negative_integer expects m >= 0");
  const auto b = bernoulli_numbers(m + 1);
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign * b[m + 1] / (m + 1);
}

}  // namespace casimir
