#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace steinpairs {

using RealFunction = std::function<double(double)>;

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_intervals = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  int intervals = 0;
  bool converged = false;
  // Subdivision stopped improving the error; accepted as converged when the
  // error is within 1000x the requested tolerance.
  bool roundoff_limited = false;
};

// Adaptive Gauss-Kronrod (10/21) on a finite interval. Stops when the error
// estimate meets the tolerance or reaches the roundoff floor of the integrand.
QuadratureResult integrate(const RealFunction& f, double lo, double hi,
                           const QuadratureOptions& opts = {});

// Same, but starting from a list of breakpoints (sorted, at least two).
QuadratureResult integrate_panels(const RealFunction& f, const std::vector<double>& breakpoints,
                                  const QuadratureOptions& opts = {});

// Integral of f(s) over (0, length] where f may be singular at s = 0.
// If power is finite, f(s) ~ s^(power-1) near 0 and s = length*u^(1/power)
// removes the singularity; otherwise an exponential map s = length*exp(-v)
// is used. length may be +infinity.
QuadratureResult integrate_from_endpoint(const RealFunction& f, double length,
                                         double power = std::numeric_limits<double>::quiet_NaN(),
                                         const QuadratureOptions& opts = {});

// Integral of f(s) over [0, +infinity).
QuadratureResult integrate_semi_infinite(const RealFunction& f, const QuadratureOptions& opts = {});

// Throws ConvergenceError when the result did not converge.
double require_converged(const QuadratureResult& r, const char* context);

}  // namespace steinpairs
