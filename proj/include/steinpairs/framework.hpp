#pragma once

#include <string>
#include <variant>
#include <vector>

#include "steinpairs/distribution.hpp"
#include "steinpairs/stein_solution.hpp"
#include "steinpairs/test_function.hpp"

namespace steinpairs {

struct ValidationReport {
  int grid_size = 0;
  bool density_positive = true;
  bool gamma_nonincreasing = true;
  double max_gamma_increase = 0.0;  // largest gamma(x_{i+1}) - gamma(x_i) > 0
  double gamma_mean = 0.0;          // quadrature of gamma p
  bool gamma_mean_zero = true;
  bool x0_found = false;
  double normalization = 1.0;
  bool passed = false;
};

// Conditions on p and gamma checked on a grid. Throws SpecError if p <= 0
// at any grid point.
ValidationReport validate_spec(const DistributionSpec& spec, int grid_size = 1001, double tol = 1e-10);

double compute_I(const DistributionSpec& spec, double x);
double compute_eta(const DistributionSpec& spec, double x);
// Throws SpecError if gamma has no sign change on the grid window.
double find_x0(const DistributionSpec& spec);

enum class MillsVerdict { kPlausible, kInconclusive, kNotIndicated };
const char* to_string(MillsVerdict v);

struct MillsEstimate {
  std::vector<double> points;
  std::vector<double> ratios;  // F/p (lower) or (1-F)/p (upper)
  double last = 0.0;
  bool monotone = false;
  bool oscillating = false;
  MillsVerdict verdict = MillsVerdict::kNotIndicated;
};

MillsEstimate mills_limit_estimate(const DistributionSpec& spec, Endpoint endpoint, int steps = 40,
                                   double tol = 1e-6);

struct ReconstructedDensity {
  SpecPtr spec;
  double K = 0.0;  // p = K/eta * exp(Q)
  double x0 = 0.0;
  // Q decreased below -30 along a geometric sequence toward each end, or
  // kept falling by a fixed step per halving down to double resolution.
  bool lower_trend = false;
  bool upper_trend = false;
};

ReconstructedDensity density_from_coefficients(const RealFunction& gamma, const RealFunction& eta,
                                               const SupportInterval& support,
                                               std::optional<double> x0_hint = std::nullopt);

SteinSolution standard_solution(SpecPtr spec, const TestFunction& h);

struct KolmogorovSolution {
  SteinSolution solution;
  double S = 0.0;  // F(z)(1-F(z))/I(z) = sup |g_z|
};
KolmogorovSolution kolmogorov_solution(SpecPtr spec, double z);
// S(z) with its endpoint limits 1/gamma(a+) and -1/gamma(b-).
double kolmogorov_sup(const DistributionSpec& spec, double z);

struct BoundReport {
  std::string name;
  int order = 0;  // derivative order of g being bounded
  double bound = 0.0;
  double estimate = 0.0;
  double argmax = 0.0;
  double refinement_gap = 0.0;
  double tolerance = 0.0;
  bool holds = false;
  bool advisory = false;  // bound uses estimated norms
  bool at_truncation = false;
  std::string note;
};

// Grid window used to measure sup norms of g^(order): the support (or
// quantile cutoffs) with finite ends pulled in by delta for order >= 1.
struct MeasureWindow {
  double lo;
  double hi;
};
MeasureWindow measure_window(const DistributionSpec& spec, int order);

BoundReport bound_bounded(SpecPtr spec, const TestFunction& h, int grid_size = 4097);

struct LipschitzPointBound {
  double g_bound = 0.0;
  double gprime_bound = 0.0;
  double H = 0.0;
  double G = 0.0;
  // Ratio multiplying ||h'|| in each bound.
  double g_factor = 0.0;
  double gprime_factor = 0.0;
};
LipschitzPointBound bound_lipschitz(const DistributionSpec& spec, const TestFunction& h, double x);

double stein_kernel(const DistributionSpec& spec, double x);

struct SampleMeasure {
  std::vector<double> points;
};
struct DiscreteMeasure {
  std::vector<double> points;
  std::vector<double> weights;
};
using Measure = std::variant<std::monostate, SampleMeasure, DiscreteMeasure>;

// E[eta f' + gamma f] under the measure (monostate = the spec's own law).
double characterization_residual(const DistributionSpec& spec, const TestFunction& f, const Measure& measure);

// Density proportional to eta p with coefficient eta' + gamma.
SpecPtr derivative_lift(const DistributionSpec& spec);
// h2 = h' - gamma' g_h, the right-hand side solved by g_h'.
TestFunction lifted_test_function(const SteinSolution& solution);

struct PairRegressionReport {
  double lambda = 0.0;
  double E_abs_R = 0.0;
  double E_abs_S = 0.0;
  double E_abs_cube = 0.0;
};

struct PluginNorms {
  double f = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
};

double plugin_bound(const PairRegressionReport& r, const PluginNorms& norms);

}  // namespace steinpairs
