#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "steinpairs/beta_stein.hpp"
#include "steinpairs/framework.hpp"
#include "steinpairs/polya.hpp"

namespace steinpairs {

struct RateStudyResult {
  BetaParams params{1.0, 1.0};
  std::string fixture;
  double mean_target = 0.0;  // E h(Z)
  std::vector<int> n_values;
  std::vector<double> distances;  // |E h(W) - E h(Z)|
  std::vector<double> bounds;     // theorem_mt_bound
  std::vector<bool> degenerate;   // distance below 1e-14, left out of the fit
  double loglog_slope = 0.0;      // NaN when fewer than two usable points
  double slope_stderr = 0.0;
  int fit_points = 0;
  bool bounds_hold = false;
};

// Exact distances from the pmf against theorem_mt_bound; the slope is an
// unweighted least-squares fit of log distance on log n over n >= min_fit_n.
// Throws SmoothnessError unless ||h'|| and ||h''|| are declared.
RateStudyResult rate_study(const BetaParams& p, const TestFunction& h, const std::vector<int>& n_values,
                           int min_fit_n = 20);

// rate_study over every (params, fixture) pair, run on worker threads.
// Results are in params-major order.
std::vector<RateStudyResult> rate_grid(const std::vector<BetaParams>& params, const std::vector<TestFunction>& fixtures,
                                       const std::vector<int>& n_values, int threads = 0);

struct IntroComparison {
  int n = 0;
  double ours = 0.0;    // theorem_mt_bound at a = b = 1e-8, unit norms
  double limit = 0.0;   // (2/(3n))(1 - 1/n)
  double theirs = 0.0;  // 9/(2n)
  bool ours_smaller = false;
};
IntroComparison intro_comparison(int n);

struct ExponentialCheck {
  double alpha = 1.0;
  std::vector<BoundReport> bounds;  // orders 0, 1, 2
  double lift_l1 = 0.0;             // L1 distance of the lifted law to Gamma(2, alpha)
  bool holds = false;
};
// Sup norms of g, g', g'' for the Exponential(alpha) target against
// ||h'||/alpha, ||h'|| and (2 alpha/3)||h'|| + (2/3)||h''||.
ExponentialCheck exponential_check(double alpha, const TestFunction& h, int grid_size = 4097);

struct MillsReport {
  int levels = 0;
  std::vector<double> points;  // x_2n
  std::vector<double> ratios;  // F(x_2n)/p(x_2n)
  std::vector<double> densities;
  double normalization = 0.0;  // integral of p
  double min_ratio = 0.0;
  bool ratios_hold = false;    // all >= 1/2 - tol
  bool density_decreasing = false;
  MillsVerdict verdict = MillsVerdict::kNotIndicated;
};
// levels <= 40.
MillsReport mills_counterexample(int levels, double tol = 1e-3);

struct DensityRoundTrip {
  std::string target;
  double l1 = 0.0;  // integral of |p_reconstructed - p|
  double K = 0.0;
  double x0 = 0.0;
  bool lower_trend = false;
  bool upper_trend = false;
};
// Rebuilds p from the spec's gamma and eta and compares it with the density.
DensityRoundTrip density_round_trip(const SpecPtr& spec);

struct RegressionCheck {
  double a = 0.0;
  double b = 0.0;
  int n = 0;
  double max_first_error = 0.0;   // |conditional - lambda gamma|
  double max_second_error = 0.0;  // |conditional - quadratic display|
  double max_eta_error = 0.0;     // |quadratic - 2 lambda (W(1-W) + S)|
  bool holds = false;
};
RegressionCheck regression_check(const PolyaModel& model, double tol = 1e-13);

struct MonteCarloCheck {
  int n = 0;
  long long reps = 0;
  std::uint64_t seed = 0;
  std::vector<double> empirical;
  std::vector<double> exact;
  double tv = 0.0;
  double tv_cap = 0.0;  // 4 sqrt((n+1)/reps)
  double mean_w = 0.0;
  double mean_w_prime = 0.0;
  bool holds = false;
};
MonteCarloCheck monte_carlo_check(const PolyaModel& model, long long reps, std::uint64_t seed, int threads = 0);

// Monte Carlo estimate of E h(W) against the exact pmf value.
struct MonteCarloDistance {
  double exact = 0.0;
  double estimate = 0.0;
  double standard_error = 0.0;
  bool within = false;  // |estimate - exact| <= 4 standard errors
};
MonteCarloDistance monte_carlo_distance(const PolyaModel& model, const TestFunction& h, long long reps,
                                        std::uint64_t seed, int threads = 0);

}  // namespace steinpairs
