#pragma once

#include <optional>

#include "steinpairs/distribution.hpp"
#include "steinpairs/test_function.hpp"

namespace steinpairs {

// Standard solution g_h of eta g' + gamma g = h - E h(Z). Immutable.
class SteinSolution {
 public:
  struct Parts {
    SpecPtr spec;
    TestFunction h = TestFunction::constant(0.0);
    double eh = 0.0;
    // x -> integral of (h - Eh) p over (a, x].
    RealFunction numerator;
    // x -> I(x) = eta(x) p(x).
    RealFunction weight;
    std::optional<double> lower_value;
    std::optional<double> upper_value;
    bool limits_converged = true;
    // Optional exact representations (e.g. polynomial solutions).
    RealFunction exact_value;
    RealFunction exact_derivative;
  };

  explicit SteinSolution(Parts parts);

  double operator()(double x) const;
  // g'(x) on the open support from the rearranged Stein equation.
  double derivative(double x) const;
  double h_tilde(double x) const { return parts_.h(x) - parts_.eh; }
  // eta g' + gamma g - h~ with g' from a five-point central difference of g.
  double residual(double x) const;

  double mean_h() const noexcept { return parts_.eh; }
  const DistributionSpec& spec() const { return *parts_.spec; }
  SpecPtr spec_ptr() const { return parts_.spec; }
  const TestFunction& h() const noexcept { return parts_.h; }
  std::optional<double> lower_value() const noexcept { return parts_.lower_value; }
  std::optional<double> upper_value() const noexcept { return parts_.upper_value; }
  bool limits_converged() const noexcept { return parts_.limits_converged; }
  double weight(double x) const { return parts_.weight(x); }

 private:
  Parts parts_;
};

// One-sided limit of f at a finite endpoint along endpoint + sign*d*2^-k.
struct EndpointLimit {
  double value = 0.0;
  bool converged = false;
};
EndpointLimit numeric_limit(const RealFunction& f, double endpoint, double direction, double scale);

}  // namespace steinpairs
