#include "steinpairs/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>
#include <numbers>
#include <string>

#include "steinpairs/errors.hpp"

namespace steinpairs {

SpecPtr beta_spec(const BetaParams& p, bool closed_eta, SpecOptions opts) {
  const double a = p.a();
  const double b = p.b();
  const double lb = log_beta(p);
  SpecDefinition d;
  d.name = "beta(" + std::to_string(a) + "," + std::to_string(b) + ")";
  d.support = SupportInterval(0.0, 1.0);
  d.density = [p](double x) { return beta_pdf(x, p).value; };
  d.log_density = [p](double x) { return beta_log_pdf(x, p); };
  d.density_from_lower = [a, b, lb](double s) {
    return std::exp((a - 1.0) * std::log(s) + (b - 1.0) * std::log1p(-s) - lb);
  };
  d.density_from_upper = [p](double s) { return beta_pdf_from_upper(s, p); };
  d.gamma = [a, b](double x) { return a - (a + b) * x; };
  d.gamma_derivative = [a, b](double) { return -(a + b); };
  d.psi = [a, b](double x) { return (a - 1.0) / x - (b - 1.0) / (1.0 - x); };
  if (closed_eta) {
    d.eta = [](double x) { return x * (1.0 - x); };
    d.eta_derivative = [](double x) { return 1.0 - 2.0 * x; };
  }
  d.cdf = [p](double x) { return beta_cdf(x, p); };
  d.survival = [p](double x) { return beta_sf(x, p); };
  d.lower_power = a;
  d.upper_power = b;
  d.known_mean = p.mean();
  d.known_median = beta_median(p);
  return make_spec(std::move(d), opts);
}

SpecPtr normal_spec(bool closed_eta) {
  SpecDefinition d;
  d.name = "normal(0,1)";
  d.support = SupportInterval(-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
  const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  d.density = [c](double x) { return c * std::exp(-0.5 * x * x); };
  d.log_density = [c](double x) { return std::log(c) - 0.5 * x * x; };
  d.gamma = [](double x) { return -x; };
  d.gamma_derivative = [](double) { return -1.0; };
  d.psi = [](double x) { return -x; };
  if (closed_eta) {
    d.eta = [](double) { return 1.0; };
    d.eta_derivative = [](double) { return 0.0; };
  }
  d.cdf = [](double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); };
  d.survival = [](double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); };
  d.known_mean = 0.0;
  d.known_median = 0.0;
  return make_spec(std::move(d));
}

SpecPtr exponential_spec(double alpha, bool closed_eta) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("exponential_spec: alpha must be positive");
  SpecDefinition d;
  d.name = "exponential(" + std::to_string(alpha) + ")";
  d.support = SupportInterval(0.0, std::numeric_limits<double>::infinity());
  d.density = [alpha](double x) { return alpha * std::exp(-alpha * x); };
  d.gamma = [alpha](double x) { return 1.0 - alpha * x; };
  d.gamma_derivative = [alpha](double) { return -alpha; };
  d.psi = [alpha](double) { return -alpha; };
  if (closed_eta) {
    d.eta = [](double x) { return x; };
    d.eta_derivative = [](double) { return 1.0; };
  }
  d.cdf = [alpha](double x) { return -std::expm1(-alpha * x); };
  d.survival = [alpha](double x) { return std::exp(-alpha * x); };
  d.lower_power = 1.0;
  d.known_mean = 1.0 / alpha;
  d.known_median = std::log(2.0) / alpha;
  return make_spec(std::move(d));
}

SpecPtr gamma_spec(double shape, double rate, bool closed_eta) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw DomainError("gamma_spec: shape and rate must be positive");
  SpecDefinition d;
  d.name = "gamma(" + std::to_string(shape) + "," + std::to_string(rate) + ")";
  d.support = SupportInterval(0.0, std::numeric_limits<double>::infinity());
  const double lnorm = shape * std::log(rate) - log_gamma(shape);
  d.density = [shape, rate, lnorm](double x) {
    return std::exp(lnorm + (shape - 1.0) * std::log(x) - rate * x);
  };
  d.gamma = [shape, rate](double x) { return shape - rate * x; };
  d.gamma_derivative = [rate](double) { return -rate; };
  d.psi = [shape, rate](double x) { return (shape - 1.0) / x - rate; };
  if (closed_eta) {
    d.eta = [](double x) { return x; };
    d.eta_derivative = [](double) { return 1.0; };
  }
  d.lower_power = shape;
  d.known_mean = shape / rate;
  return make_spec(std::move(d));
}

MillsCounterexample mills_counterexample_spec(int nodes) {
  if (nodes < 3) throw DomainError("mills_counterexample_spec: need at least 3 nodes");
  // Ascending knots t_0 = 0 < t_1 = x_nodes < ... < t_nodes = x_1 = 1.
  auto knots = std::make_shared<std::vector<double>>(nodes + 1, 0.0);
  auto vals = std::make_shared<std::vector<double>>(nodes + 1, 0.0);
  for (int n = 1; n <= nodes; ++n) {
    double q;
    if (n == 1) {
      q = 0.5;
    } else if (n % 2 == 0) {
      q = std::ldexp(1.0, -2 * n);  // delta_n^2
    } else {
      q = std::ldexp(1.0, -(n - 1));  // delta_{n-1}
    }
    (*knots)[nodes + 1 - n] = std::ldexp(1.0, 1 - n);
    (*vals)[nodes + 1 - n] = q;
  }
  auto cum = std::make_shared<std::vector<double>>(nodes + 1, 0.0);
  double first_moment = 0.0;
  for (int i = 1; i <= nodes; ++i) {
    double t0 = (*knots)[i - 1], t1 = (*knots)[i];
    double v0 = (*vals)[i - 1], v1 = (*vals)[i];
    double h = t1 - t0;
    (*cum)[i] = (*cum)[i - 1] + 0.5 * h * (v0 + v1);
    first_moment += h / 6.0 * (t0 * (2.0 * v0 + v1) + t1 * (v0 + 2.0 * v1));
  }
  const double z = (*cum)[nodes];
  for (double& v : *vals) v /= z;
  for (double& c : *cum) c /= z;
  const double mean = first_moment / z;

  auto segment = [knots](double x) {
    auto it = std::upper_bound(knots->begin(), knots->end(), x);
    std::size_t i = static_cast<std::size_t>(it - knots->begin());
    if (i == 0) i = 1;
    if (i >= knots->size()) i = knots->size() - 1;
    return i;  // x in [t_{i-1}, t_i]
  };
  auto density = [knots, vals, segment](double x) {
    if (!(x > 0.0) || x > 1.0) return 0.0;
    std::size_t i = segment(x);
    double t0 = (*knots)[i - 1], t1 = (*knots)[i];
    double w = (x - t0) / (t1 - t0);
    return (*vals)[i - 1] + w * ((*vals)[i] - (*vals)[i - 1]);
  };
  auto cdf = [knots, vals, cum, segment, density](double x) {
    if (!(x > 0.0)) return 0.0;
    if (x >= 1.0) return 1.0;
    std::size_t i = segment(x);
    double t0 = (*knots)[i - 1];
    return (*cum)[i - 1] + 0.5 * (x - t0) * ((*vals)[i - 1] + density(x));
  };
  auto survival = [knots, vals, cum, segment, density](double x) {
    if (!(x > 0.0)) return 1.0;
    if (x >= 1.0) return 0.0;
    std::size_t i = segment(x);
    double t1 = (*knots)[i];
    double rest = 1.0 - (*cum)[i];
    return rest + 0.5 * (t1 - x) * ((*vals)[i] + density(x));
  };

  SpecDefinition d;
  d.name = "mills-counterexample";
  d.support = SupportInterval(0.0, 1.0);
  d.density = density;
  d.gamma = [mean](double x) { return mean - x; };
  d.gamma_derivative = [](double) { return -1.0; };
  d.cdf = cdf;
  d.survival = survival;
  d.known_mean = mean;
  SpecOptions opts;
  opts.quadrature.max_intervals = 20000;
  MillsCounterexample out;
  out.spec = make_spec(std::move(d), opts);
  for (int n = 1; n <= nodes; ++n) {
    out.nodes.push_back((*knots)[nodes + 1 - n]);
    out.values.push_back((*vals)[nodes + 1 - n]);
  }
  return out;
}

}  // namespace steinpairs
