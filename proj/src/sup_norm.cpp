#include "steinpairs/sup_norm.hpp"

#include <cmath>
#include <numbers>

#include "steinpairs/errors.hpp"

namespace steinpairs {

std::vector<double> chebyshev_grid(double lo, double hi, int n) {
  if (n < 2) throw DomainError("chebyshev_grid: need at least two points");
  std::vector<double> x(static_cast<std::size_t>(n));
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int j = 0; j < n; ++j) {
    x[static_cast<std::size_t>(j)] = mid - half * std::cos(std::numbers::pi * j / (n - 1));
  }
  x.front() = lo;
  x.back() = hi;
  return x;
}

SupEstimate estimate_sup(const RealFunction& f, double lo, double hi, int grid_size) {
  std::vector<double> grid = chebyshev_grid(lo, hi, grid_size);
  std::size_t best = 0;
  double best_val = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double v = std::fabs(f(grid[i]));
    if (std::isnan(v)) continue;
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  SupEstimate out;
  out.grid_value = best_val;
  out.value = best_val;
  out.argmax = grid[best];
  out.at_boundary = (best == 0 || best + 1 == grid.size());

  // Golden-section maximisation of |f| on the two neighbouring cells.
  double l = grid[best == 0 ? 0 : best - 1];
  double r = grid[best + 1 == grid.size() ? best : best + 1];
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = r - phi * (r - l);
  double d = l + phi * (r - l);
  double fc = std::fabs(f(c));
  double fd = std::fabs(f(d));
  for (int it = 0; it < 80 && (r - l) > 1e-14 * (1.0 + std::fabs(l)); ++it) {
    if (fc > fd) {
      r = d;
      d = c;
      fd = fc;
      c = r - phi * (r - l);
      fc = std::fabs(f(c));
    } else {
      l = c;
      c = d;
      fc = fd;
      d = l + phi * (r - l);
      fd = std::fabs(f(d));
    }
  }
  double cand_x = fc > fd ? c : d;
  double cand = std::max(fc, fd);
  if (std::isfinite(cand) && cand > out.value) {
    out.value = cand;
    out.argmax = cand_x;
  }
  out.refinement_gap = out.value - out.grid_value;
  return out;
}

}  // namespace steinpairs
