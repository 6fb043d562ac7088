#include "steinpairs/stein_solution.hpp"

#include <algorithm>
#include <cmath>

#include "steinpairs/errors.hpp"

namespace steinpairs {

SteinSolution::SteinSolution(Parts parts) : parts_(std::move(parts)) {
  if (!parts_.spec) throw SpecError("SteinSolution: missing spec");
}

double SteinSolution::operator()(double x) const {
  const SupportInterval& s = parts_.spec->support();
  if (s.lower_finite() && x <= s.lower) {
    if (!parts_.lower_value) throw DomainError("SteinSolution: no value at lower endpoint");
    return *parts_.lower_value;
  }
  if (s.upper_finite() && x >= s.upper) {
    if (!parts_.upper_value) throw DomainError("SteinSolution: no value at upper endpoint");
    return *parts_.upper_value;
  }
  if (parts_.exact_value) return parts_.exact_value(x);
  double w = parts_.weight(x);
  if (!(w > 1e-290) || !std::isfinite(w)) {
    // eta*p underflowed; fall back to the endpoint value on the nearer side.
    bool nearer_lower = x <= parts_.spec->median();
    const auto& v = nearer_lower ? parts_.lower_value : parts_.upper_value;
    if (v) return *v;
    throw DomainError("SteinSolution: eta*p underflow with no endpoint value available");
  }
  return parts_.numerator(x) / w;
}

double SteinSolution::derivative(double x) const {
  if (parts_.exact_derivative) return parts_.exact_derivative(x);
  const DistributionSpec& sp = *parts_.spec;
  return (h_tilde(x) - sp.gamma(x) * (*this)(x)) / sp.eta(x);
}

double SteinSolution::residual(double x) const {
  const DistributionSpec& sp = *parts_.spec;
  const SupportInterval& s = sp.support();
  double step = 1e-3 * std::sqrt(std::max(1.0, std::fabs(x)));
  if (s.lower_finite()) step = std::min(step, 0.2 * (x - s.lower));
  if (s.upper_finite()) step = std::min(step, 0.2 * (s.upper - x));
  const SteinSolution& g = *this;
  double d = (g(x - 2 * step) - 8 * g(x - step) + 8 * g(x + step) - g(x + 2 * step)) / (12 * step);
  return sp.eta(x) * d + sp.gamma(x) * g(x) - h_tilde(x);
}

EndpointLimit numeric_limit(const RealFunction& f, double endpoint, double direction, double scale) {
  double prev = f(endpoint + direction * scale * std::ldexp(1.0, -16));
  for (int k = 17; k <= 60; ++k) {
    double x = endpoint + direction * scale * std::ldexp(1.0, -k);
    if (x == endpoint) break;
    double v = f(x);
    if (std::fabs(v - prev) <= 1e-12 * std::max(1.0, std::fabs(v))) return {v, true};
    prev = v;
  }
  return {prev, false};
}

}  // namespace steinpairs
