#pragma once

#include "casimir/dielectric.hpp"

namespace casimir {

struct KramersKronigResult {
  double value;           // eps(i xi)
  double error_estimate;  // absolute, from halving the grid
};

/// eps(i xi) = 1 + (2/pi) int_0^inf omega Im eps(omega) / (omega^2 + xi^2) d omega.
///
/// omega * Im eps is interpolated linearly between grid points and the
/// rational kernel is integrated exactly on each segment. The regions below
/// and above the grid follow the table's LowFrequencyExtension and
/// HighFrequencyTail. Throws ConvergenceError (carrying the estimate) when
/// the grid is too coarse for options().rel_tol.
KramersKronigResult kramers_kronig_to_imag(const OpticalTable& table, double xi);

/// lim_{xi -> 0} of the transform; +infinity for a conducting extension with
/// nonzero absorption at the first grid point.
double kramers_kronig_static(const OpticalTable& table);

}  // namespace casimir
