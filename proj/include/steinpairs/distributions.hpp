#pragma once

#include <vector>

#include "steinpairs/distribution.hpp"
#include "steinpairs/special_functions.hpp"

namespace steinpairs {

// Beta(a,b) with gamma(x) = a - (a+b)x and eta(x) = x(1-x) supplied in
// closed form.
SpecPtr beta_spec(const BetaParams& p, bool closed_eta = true, SpecOptions opts = {});
// Standard normal with gamma(x) = -x.
SpecPtr normal_spec(bool closed_eta = true);
// Exponential(alpha) with gamma(x) = 1 - alpha x, eta(x) = x.
SpecPtr exponential_spec(double alpha, bool closed_eta = true);
// Gamma(shape k, rate alpha) with gamma(x) = k - alpha x, eta(x) = x.
SpecPtr gamma_spec(double shape, double rate, bool closed_eta = true);

// Piecewise-linear density on (0,1) whose Mills ratio F/p does not vanish
// at 0. Nodes x_n = 2^(1-n); q(1) = 1/2, q(x_2n) = 4^(-2n), q(x_2n+1) =
// 4^(-n), linear in between, and linear to 0 below the last node x_nodes.
// gamma(x) = mean - x.
struct MillsCounterexample {
  SpecPtr spec;
  std::vector<double> nodes;   // x_1 > x_2 > ... > x_nodes
  std::vector<double> values;  // normalized p(x_n)
};
MillsCounterexample mills_counterexample_spec(int nodes = 81);

}  // namespace steinpairs
