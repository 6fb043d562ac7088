#pragma once

#include "steinpairs/quadrature.hpp"

namespace steinpairs {

struct SupEstimate {
  double value = 0.0;     // estimated sup |f|
  double argmax = 0.0;
  double grid_value = 0.0;  // best value on the grid before refinement
  double refinement_gap = 0.0;  // value - grid_value
  bool at_boundary = false;  // argmax is a grid endpoint
};

// Grid estimate of sup |f| over [lo, hi] on Chebyshev-Lobatto points
// (endpoints included), refined by golden-section search around the grid argmax.
SupEstimate estimate_sup(const RealFunction& f, double lo, double hi, int grid_size = 4097);

// Chebyshev-Lobatto points on [lo, hi], ascending.
std::vector<double> chebyshev_grid(double lo, double hi, int n);

}  // namespace steinpairs
