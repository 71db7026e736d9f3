#pragma once

// End-to-end experiments assembled from the library modules; the CLI and the
// C API drive these.

#include "qlab/spin.hpp"

#include <vector>

namespace qlab {

struct ClassicalityPoint {
  SpinLength spin{0};
  int n_bands = 2;
  double width = 0.0;             // Delta Theta = pi / n_bands
  double width_sqrt_s = 0.0;      // Delta Theta * sqrt(s)
  double epsilon = 0.0;           // Q vs mixture-of-reduced-Q deviation
  double marginal_residual = 0.0; // max |sum p - w| over four setting pairs
  int skipped_outcomes = 0;
  int grid_degree = 0;
};

/// Both parties use polar bands about +z (setting 1) and about +x (setting 2)
/// on one grid aligned with the +z bands. epsilon is taken for setting 1; the
/// residual compares every marginal of the hidden joint table with the
/// trace-route outcome table of the matching setting pair.
ClassicalityPoint classicality_point(const TwoSpinState& state, int n_bands, double oversample = 1.0);

}  // namespace qlab
