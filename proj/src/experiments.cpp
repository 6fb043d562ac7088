#include "steinpairs/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "steinpairs/distributions.hpp"
#include "steinpairs/errors.hpp"
#include "steinpairs/sup_norm.hpp"

namespace steinpairs {

namespace {

constexpr double kDegenerate = 1e-14;

struct LineFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double stderr_ = std::numeric_limits<double>::quiet_NaN();
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  const std::size_t m = x.size();
  if (m < 2) return f;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  f.slope = sxy / sxx;
  if (m > 2) {
    const double icpt = my - f.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double r = y[i] - icpt - f.slope * x[i];
      rss += r * r;
    }
    f.stderr_ = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
  }
  return f;
}

// Runs body(i) for i in [0, count) on up to `threads` workers.
template <class Body>
void parallel_for(std::size_t count, int threads, Body body) {
  if (threads <= 0) threads = default_thread_count();
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

RateStudyResult rate_study(const BetaParams& p, const TestFunction& h, const std::vector<int>& n_values,
                           int min_fit_n) {
  auto n1 = h.norm(1);
  auto n2 = h.norm(2);
  if (!n1 || !n2) throw SmoothnessError("rate_study: " + h.name() + " needs declared ||h'|| and ||h''||");
  RateStudyResult r;
  r.params = p;
  r.fixture = h.name();
  r.n_values = n_values;
  // Tighter than the default so that equal means register as degenerate.
  SpecOptions tight;
  tight.quadrature = {0.0, 1e-15, 4000};
  auto spec = beta_spec(p, true, tight);
  r.mean_target = spec->expectation([&](double x) { return h(x); });
  std::vector<double> lx, ly;
  r.bounds_hold = true;
  for (int n : n_values) {
    PolyaModel m(p.a(), p.b(), n);
    double d = std::fabs(exact_expectation(m, h) - r.mean_target);
    double bound = theorem_mt_bound(n, p, *n1, *n2);
    bool degenerate = d < kDegenerate;
    r.distances.push_back(d);
    r.bounds.push_back(bound);
    r.degenerate.push_back(degenerate);
    r.bounds_hold = r.bounds_hold && d <= bound + 1e-12;
    if (!degenerate && n >= min_fit_n) {
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(d));
    }
  }
  LineFit f = least_squares(lx, ly);
  r.loglog_slope = f.slope;
  r.slope_stderr = f.stderr_;
  r.fit_points = static_cast<int>(lx.size());
  return r;
}

std::vector<RateStudyResult> rate_grid(const std::vector<BetaParams>& params, const std::vector<TestFunction>& fixtures,
                                       const std::vector<int>& n_values, int threads) {
  std::vector<RateStudyResult> out(params.size() * fixtures.size());
  parallel_for(out.size(), threads, [&](std::size_t i) {
    out[i] = rate_study(params[i / fixtures.size()], fixtures[i % fixtures.size()], n_values);
  });
  return out;
}

IntroComparison intro_comparison(int n) {
  if (n < 2) throw DomainError("intro_comparison: n must be >= 2");
  IntroComparison c;
  c.n = n;
  c.ours = theorem_mt_bound(n, BetaParams(1e-8, 1e-8), 1.0, 1.0);
  c.limit = 2.0 / (3.0 * n) * (1.0 - 1.0 / n);
  c.theirs = 9.0 / (2.0 * n);
  c.ours_smaller = c.ours < c.theirs;
  return c;
}

ExponentialCheck exponential_check(double alpha, const TestFunction& h, int grid_size) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("exponential_check: alpha must be positive");
  auto n1 = h.norm(1);
  auto n2 = h.norm(2);
  if (!n1 || !n2 || !h.has_derivative(1)) {
    throw SmoothnessError("exponential_check: " + h.name() + " needs h', ||h'|| and ||h''||");
  }
  SpecPtr spec = exponential_spec(alpha);
  SteinSolution g = standard_solution(spec, h);
  // Differentiated equation: x g'' + (2 - alpha x) g' - alpha g = h'.
  auto g2 = [&](double x) {
    return (h.derivative(1, x) + alpha * g(x) - (2.0 - alpha * x) * g.derivative(x)) / x;
  };
  const RealFunction parts[3] = {[&](double x) { return g(x); }, [&](double x) { return g.derivative(x); }, g2};
  const double bounds[3] = {*n1 / alpha, *n1, 2.0 * alpha / 3.0 * *n1 + 2.0 / 3.0 * *n2};
  const char* names[3] = {"sup|g| <= ||h'||/alpha", "sup|g'| <= ||h'||",
                          "sup|g''| <= (2 alpha/3)||h'|| + (2/3)||h''||"};
  ExponentialCheck out;
  out.alpha = alpha;
  out.holds = true;
  for (int k = 0; k < 3; ++k) {
    MeasureWindow w = measure_window(*spec, k);
    SupEstimate est = estimate_sup(parts[k], w.lo, w.hi, grid_size);
    BoundReport r;
    r.name = names[k];
    r.order = k;
    r.bound = bounds[k];
    r.estimate = est.value;
    r.argmax = est.argmax;
    r.refinement_gap = est.refinement_gap;
    r.tolerance = 1e-8 * std::max(1.0, r.bound);
    r.holds = r.estimate <= r.bound + r.tolerance;
    r.advisory = h.norm_estimated(1) || h.norm_estimated(2);
    r.at_truncation = est.at_boundary && est.argmax >= w.hi;
    if (r.at_truncation) r.note = "argmax at truncation boundary";
    out.holds = out.holds && r.holds;
    out.bounds.push_back(r);
  }
  SpecPtr lift = derivative_lift(*spec);
  QuadratureOptions opts{0.0, 1e-12, 4000};
  QuadratureResult l1 = integrate_semi_infinite(
      [&](double x) {
        if (x <= 0.0) return 0.0;
        return std::fabs(lift->density(x) - alpha * alpha * x * std::exp(-alpha * x));
      },
      opts);
  out.lift_l1 = l1.value + l1.error;
  return out;
}

MillsReport mills_counterexample(int levels, double tol) {
  if (levels < 1 || levels > 40) throw DomainError("mills_counterexample: levels must be in 1..40");
  MillsCounterexample ce = mills_counterexample_spec(81);
  const DistributionSpec& spec = *ce.spec;
  MillsReport r;
  r.levels = levels;
  for (int n = 1; n <= levels; ++n) {
    const std::size_t i = static_cast<std::size_t>(2 * n - 1);  // nodes[0] = x_1
    const double x = ce.nodes[i];
    const double p = spec.density(x);
    r.points.push_back(x);
    r.densities.push_back(p);
    r.ratios.push_back(spec.cdf(x) / p);
  }
  // Piecewise linear: integrate panel by panel between nodes.
  std::vector<double> breaks{0.0};
  for (auto it = ce.nodes.rbegin(); it != ce.nodes.rend(); ++it) breaks.push_back(*it);
  r.normalization = integrate_panels([&](double x) { return spec.density(x); }, breaks, {0.0, 1e-14, 20000}).value;
  r.min_ratio = *std::min_element(r.ratios.begin(), r.ratios.end());
  r.ratios_hold = r.min_ratio >= 0.5 - tol;
  r.density_decreasing = true;
  for (std::size_t i = 1; i < r.densities.size(); ++i) {
    r.density_decreasing = r.density_decreasing && r.densities[i] < r.densities[i - 1];
  }
  r.verdict = mills_limit_estimate(spec, Endpoint::kLower).verdict;
  return r;
}

DensityRoundTrip density_round_trip(const SpecPtr& spec) {
  const DistributionSpec& sp = *spec;
  ReconstructedDensity rec = density_from_coefficients([&](double x) { return sp.gamma(x); },
                                                       [&](double x) { return sp.eta(x); }, sp.support());
  DensityRoundTrip out;
  out.target = sp.name();
  out.K = rec.K;
  out.x0 = rec.x0;
  out.lower_trend = rec.lower_trend;
  out.upper_trend = rec.upper_trend;
  auto diff = [&](double x) {
    if (!sp.support().contains_open(x)) return 0.0;
    double d = std::fabs(rec.spec->density(x) - sp.density(x));
    // Both densities overflow right at a singular end.
    return std::isfinite(d) ? d : 0.0;
  };
  // The difference sits at roundoff level, so an absolute tolerance is needed.
  const QuadratureOptions opts{1e-14, 1e-10, 4000};
  const double m = sp.median();
  const SupportInterval& s = sp.support();
  QuadratureResult left =
      s.lower_finite()
          ? integrate_from_endpoint([&](double t) { return diff(s.lower + t); }, m - s.lower,
                                    std::numeric_limits<double>::quiet_NaN(), opts)
          : integrate_semi_infinite([&](double t) { return diff(m - t); }, opts);
  QuadratureResult right =
      s.upper_finite()
          ? integrate_from_endpoint([&](double t) { return diff(s.upper - t); }, s.upper - m,
                                    std::numeric_limits<double>::quiet_NaN(), opts)
          : integrate_semi_infinite([&](double t) { return diff(m + t); }, opts);
  out.l1 = require_converged(left, "density_round_trip (left)") + require_converged(right, "density_round_trip (right)");
  return out;
}

RegressionCheck regression_check(const PolyaModel& model, double tol) {
  RegressionCheck c;
  c.a = model.a();
  c.b = model.b();
  c.n = model.n();
  for (int k = 0; k <= model.n(); ++k) {
    RegressionFirst f = regression_first(model, k);
    RegressionSecond s = regression_second(model, k);
    c.max_first_error = std::max(c.max_first_error, std::fabs(f.conditional - f.closed_form));
    c.max_second_error = std::max(c.max_second_error, std::fabs(s.conditional - s.closed_form));
    c.max_eta_error = std::max(c.max_eta_error, std::fabs(s.closed_form - s.eta_form));
  }
  c.holds = c.max_first_error <= tol && c.max_second_error <= tol && c.max_eta_error <= tol;
  return c;
}

MonteCarloCheck monte_carlo_check(const PolyaModel& model, long long reps, std::uint64_t seed, int threads) {
  MonteCarloCheck c;
  c.n = model.n();
  c.reps = reps;
  c.seed = seed;
  std::vector<PairSample> s = simulate_pair(model, reps, seed, threads);
  c.empirical = empirical_pmf(s, model.n());
  c.exact = pmf(model).probabilities();
  c.tv = total_variation(c.empirical, c.exact);
  c.tv_cap = 4.0 * std::sqrt((model.n() + 1.0) / static_cast<double>(reps));
  for (const auto& x : s) {
    c.mean_w += x.w;
    c.mean_w_prime += x.w_prime;
  }
  c.mean_w /= static_cast<double>(reps);
  c.mean_w_prime /= static_cast<double>(reps);
  c.holds = c.tv <= c.tv_cap;
  return c;
}

MonteCarloDistance monte_carlo_distance(const PolyaModel& model, const TestFunction& h, long long reps,
                                        std::uint64_t seed, int threads) {
  std::vector<PairSample> s = simulate_pair(model, reps, seed, threads);
  MonteCarloDistance d;
  d.exact = exact_expectation(model, h);
  double sum = 0.0, sum2 = 0.0;
  for (const auto& x : s) {
    double v = h(x.w);
    sum += v;
    sum2 += v * v;
  }
  const double r = static_cast<double>(reps);
  d.estimate = sum / r;
  double var = std::max(0.0, sum2 / r - d.estimate * d.estimate);
  d.standard_error = std::sqrt(var / r);
  d.within = std::fabs(d.estimate - d.exact) <= 4.0 * d.standard_error;
  return d;
}

}  // namespace steinpairs
