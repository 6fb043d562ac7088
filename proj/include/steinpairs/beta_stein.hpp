#pragma once

#include <vector>

#include "steinpairs/framework.hpp"
#include "steinpairs/special_functions.hpp"

namespace steinpairs {

class BetaSteinContext {
 public:
  explicit BetaSteinContext(BetaParams p);

  const BetaParams& params() const noexcept { return params_; }
  double gamma(double x) const { return params_.a() - (params_.a() + params_.b()) * x; }
  double eta(double x) const { return x * (1.0 - x); }
  double mean() const noexcept { return params_.mean(); }
  SpecPtr spec() const noexcept { return spec_; }
  // Context of Beta(a+k, b+k), the target solved by the k-th derivative.
  BetaSteinContext lifted(int k = 1) const { return BetaSteinContext(params_.shifted(k)); }

 private:
  BetaParams params_;
  SpecPtr spec_;
};

// C(a,b); the symmetric table applies only when a == b exactly.
double c_constant(const BetaParams& p);

// Standard solution on [0,1]. Polynomials of degree <= 6 use the exact
// polynomial solution; other h go through tail quadrature.
SteinSolution solve(const BetaSteinContext& ctx, const TestFunction& h);

// k-th derivative of the solution: interior values from the lifted
// equations, endpoint values g^(k)(0) = h_{k+1}(0)/(a+k) and
// g^(k)(1) = -h_{k+1}(1)/(b+k).
double solution_derivative(const BetaSteinContext& ctx, const SteinSolution& g, int k, double x);

// Bound on ||g^(m)|| for m >= 1 from the closed form with products of
// C(a+l, b+l). norms[j] = ||h^(j)||, j = 1..m (norms[0] unused).
double derivative_bound(const BetaParams& p, const std::vector<double>& norms, int m);
// Same quantity through B_k = C_{k-1}(||h^(k)|| + (k-1)(a+b+k-2) B_{k-1}).
double derivative_bound_recursive(const BetaParams& p, const std::vector<double>& norms, int m);
// C(a+1,b+1)||h''|| + (a+b) C(a+1,b+1) C(a,b) ||h'||.
double second_derivative_bound(const BetaParams& p, double norm_h1, double norm_h2);

std::vector<BoundReport> bound_suite(const BetaSteinContext& ctx, const TestFunction& h, int m,
                                     int grid_size = 4097);

double theorem_mt_bound(int n, const BetaParams& p, double norm_h1, double norm_h2);

double beta_plugin_bound(double lambda, double E_abs_R, double E_abs_S, double E_cube, const BetaParams& p,
                         double norm_h1, double norm_h2);

// E[X(1-X) f'(X)] - (a+b) E[(X - a/(a+b)) f(X)] under the measure.
double characterization_check(const BetaSteinContext& ctx, const TestFunction& f, const Measure& measure);

// Ratio multiplying ||h'|| in the pointwise bound on |g_h'(x)|.
double derivative_bound_ratio(const BetaSteinContext& ctx, double x);

// Numeric look at sup_x of derivative_bound_ratio against 2/(min(a,b)+1).
// Asserts nothing.
struct RatioExploration {
  double sup_ratio = 0.0;
  double argmax = 0.0;
  double conjectured = 0.0;
};
RatioExploration explore_derivative_ratio(const BetaSteinContext& ctx, int grid_size = 513);

}  // namespace steinpairs
