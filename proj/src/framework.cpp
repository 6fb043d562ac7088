#include "steinpairs/framework.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "steinpairs/errors.hpp"
#include "steinpairs/sup_norm.hpp"

namespace steinpairs {

namespace {

// Integral of (h - Eh) p over (a, x], taken over the tail of smaller mass.
double signed_left_integral(const DistributionSpec& spec, const RealFunction& f, double x, const char* what) {
  if (x <= spec.median()) return require_converged(spec.integrate_left(f, x), what);
  return -require_converged(spec.integrate_right(f, x), what);
}

}  // namespace

ValidationReport validate_spec(const DistributionSpec& spec, int grid_size, double tol) {
  ValidationReport r;
  r.grid_size = grid_size;
  const double lo = spec.grid_lower();
  const double hi = spec.grid_upper();
  double prev_gamma = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    double x = lo + (hi - lo) * (i + 1.0) / (grid_size + 1.0);
    double p = spec.density(x);
    if (!(p > 0.0)) {
      throw SpecError("validate_spec: density not positive at x=" + std::to_string(x) + " for '" +
                      spec.name() + "'");
    }
    double g = spec.gamma(x);
    if (i > 0) {
      double inc = g - prev_gamma;
      if (inc > tol * (1.0 + std::fabs(g))) {
        r.gamma_nonincreasing = false;
        r.max_gamma_increase = std::max(r.max_gamma_increase, inc);
      }
    }
    prev_gamma = g;
  }
  r.normalization = spec.normalization();
  try {
    r.gamma_mean = spec.expectation([&spec](double x) { return spec.gamma(x); });
    r.gamma_mean_zero = std::fabs(r.gamma_mean) <= tol;
  } catch (const ConvergenceError&) {
    r.gamma_mean = std::nan("");
    r.gamma_mean_zero = false;
  }
  r.x0_found = spec.x0().has_value();
  r.passed = r.density_positive && r.gamma_nonincreasing && r.gamma_mean_zero && r.x0_found;
  return r;
}

double compute_I(const DistributionSpec& spec, double x) {
  return require_converged(spec.quadrature_I(x), "compute_I");
}

double compute_eta(const DistributionSpec& spec, double x) {
  const SupportInterval& s = spec.support();
  if ((s.lower_finite() && x <= s.lower) || (s.upper_finite() && x >= s.upper)) return 0.0;
  return compute_I(spec, x) / spec.density(x);
}

double find_x0(const DistributionSpec& spec) {
  if (!spec.x0()) throw SpecError("find_x0: gamma has no sign change on the support of '" + spec.name() + "'");
  return *spec.x0();
}

const char* to_string(MillsVerdict v) {
  switch (v) {
    case MillsVerdict::kPlausible: return "plausible";
    case MillsVerdict::kInconclusive: return "inconclusive";
    case MillsVerdict::kNotIndicated: return "not_indicated";
  }
  return "unknown";
}

MillsEstimate mills_limit_estimate(const DistributionSpec& spec, Endpoint endpoint, int steps, double tol) {
  const SupportInterval& s = spec.support();
  const bool lower = endpoint == Endpoint::kLower;
  if ((lower && !s.lower_finite()) || (!lower && !s.upper_finite())) {
    throw DomainError("mills_limit_estimate: endpoint must be finite");
  }
  const double e = lower ? s.lower : s.upper;
  const double span = lower ? spec.grid_upper() - e : e - spec.grid_lower();
  const double d = std::min(1.0, span);
  MillsEstimate out;
  for (int k = 1; k <= steps; ++k) {
    double off = d * std::ldexp(1.0, -k);
    double x = lower ? e + off : e - off;
    if (x == e) break;
    double tail = lower ? spec.cdf(x) : spec.survival(x);
    double p = spec.density(x);
    out.points.push_back(x);
    out.ratios.push_back(p > 0.0 ? tail / p : std::numeric_limits<double>::infinity());
  }
  if (out.ratios.empty()) return out;
  out.last = out.ratios.back();
  // Trend over the second half of the sequence.
  std::size_t start = out.ratios.size() / 2;
  int sign_changes = 0;
  int last_sign = 0;
  bool nonincreasing = true;
  for (std::size_t i = start; i + 1 < out.ratios.size(); ++i) {
    double diff = out.ratios[i + 1] - out.ratios[i];
    double scale = std::max(std::fabs(out.ratios[i]), std::fabs(out.ratios[i + 1]));
    if (std::fabs(diff) <= 1e-12 * scale) continue;
    int sign = diff > 0 ? 1 : -1;
    if (sign > 0) nonincreasing = false;
    if (last_sign != 0 && sign != last_sign) ++sign_changes;
    last_sign = sign;
  }
  out.monotone = nonincreasing;
  out.oscillating = sign_changes >= 2;
  if (out.oscillating) {
    out.verdict = MillsVerdict::kInconclusive;
  } else if (out.last < tol) {
    out.verdict = MillsVerdict::kPlausible;
  } else {
    out.verdict = MillsVerdict::kNotIndicated;
  }
  return out;
}

namespace {

// Q(x) = integral of gamma/eta from x0 to x, tabulated at anchors that halve
// the distance to each finite end (or double it toward infinite ends).
struct QTable {
  RealFunction ratio;
  double x0 = 0.0;
  std::vector<double> lower_anchor;  // descending from x0
  std::vector<double> lower_q;
  std::vector<double> upper_anchor;  // ascending from x0
  std::vector<double> upper_q;
  QuadratureOptions opts{0.0, 1e-13, 200};

  void build(const SupportInterval& s) {
    auto fill = [&](bool toward_lower, std::vector<double>& anchor, std::vector<double>& q) {
      anchor.push_back(x0);
      q.push_back(0.0);
      const bool finite = toward_lower ? s.lower_finite() : s.upper_finite();
      const double e = toward_lower ? s.lower : s.upper;
      for (int j = 1; j <= 1100; ++j) {
        double t;
        if (finite) {
          t = e + (x0 - e) * std::ldexp(1.0, -j);
          if (t == e || t == anchor.back()) break;
        } else {
          double off = std::ldexp(1.0, j) - 1.0;
          t = toward_lower ? x0 - off : x0 + off;
          if (!std::isfinite(t)) break;
        }
        double piece = toward_lower ? -integrate(ratio, t, anchor.back(), opts).value
                                    : integrate(ratio, anchor.back(), t, opts).value;
        anchor.push_back(t);
        q.push_back(q.back() + piece);
        if (q.back() < -1000.0 || !std::isfinite(q.back())) break;
      }
    };
    fill(true, lower_anchor, lower_q);
    fill(false, upper_anchor, upper_q);
  }

  double operator()(double x) const {
    if (x <= x0) {
      // First anchor at or below x.
      auto it = std::lower_bound(lower_anchor.begin(), lower_anchor.end(), x, std::greater<double>());
      if (it == lower_anchor.end()) return -std::numeric_limits<double>::infinity();
      std::size_t j = static_cast<std::size_t>(it - lower_anchor.begin());
      if (*it == x) return lower_q[j];
      // x lies between anchor j (below) and j-1 (above).
      return lower_q[j - 1] - integrate(ratio, x, lower_anchor[j - 1], opts).value;
    }
    auto it = std::lower_bound(upper_anchor.begin(), upper_anchor.end(), x);
    if (it == upper_anchor.end()) return -std::numeric_limits<double>::infinity();
    std::size_t j = static_cast<std::size_t>(it - upper_anchor.begin());
    if (*it == x) return upper_q[j];
    return upper_q[j - 1] + integrate(ratio, upper_anchor[j - 1], x, opts).value;
  }
};

}  // namespace

ReconstructedDensity density_from_coefficients(const RealFunction& gamma, const RealFunction& eta,
                                               const SupportInterval& support, std::optional<double> x0_hint) {
  auto table = std::make_shared<QTable>();
  table->ratio = [gamma, eta](double t) { return gamma(t) / eta(t); };
  double lo = support.lower_finite() ? support.lower : -1e6;
  double hi = support.upper_finite() ? support.upper : 1e6;
  std::optional<double> x0 = x0_hint ? x0_hint : locate_sign_change(gamma, lo, hi, 4097);
  if (!x0) throw SpecError("density_from_coefficients: gamma has no sign change");
  table->x0 = *x0;
  table->build(support);

  ReconstructedDensity out;
  out.x0 = *x0;
  // Below -30, or still falling steadily when the anchors reach the double
  // resolution of a finite end (Q ~ c log(distance) falls slowly).
  auto trend = [](const std::vector<double>& q, bool finite) {
    if (*std::min_element(q.begin(), q.end()) < -30.0) return true;
    if (!finite || q.size() < 40) return false;
    for (std::size_t i = q.size() - 10; i < q.size(); ++i) {
      if (!(q[i] < q[i - 1] - 0.05)) return false;
    }
    return true;
  };
  out.lower_trend = trend(table->lower_q, support.lower_finite());
  out.upper_trend = trend(table->upper_q, support.upper_finite());

  auto unnormalized = [table, eta](double x) {
    double q = (*table)(x);
    if (!std::isfinite(q)) return 0.0;
    return std::exp(q) / eta(x);
  };
  QuadratureOptions opts{0.0, 1e-13, 4000};
  QuadratureResult left = support.lower_finite()
                              ? integrate_from_endpoint([&](double s) { return unnormalized(support.lower + s); },
                                                        *x0 - support.lower, std::nan(""), opts)
                              : integrate_semi_infinite([&](double s) { return unnormalized(*x0 - s); }, opts);
  QuadratureResult right = support.upper_finite()
                               ? integrate_from_endpoint([&](double s) { return unnormalized(support.upper - s); },
                                                         support.upper - *x0, std::nan(""), opts)
                               : integrate_semi_infinite([&](double s) { return unnormalized(*x0 + s); }, opts);
  if (!left.converged || !right.converged || !std::isfinite(left.value + right.value)) {
    throw ConvergenceError("density_from_coefficients: normalization integral diverged",
                           left.evaluations + right.evaluations, left.error + right.error);
  }
  const double z = left.value + right.value;
  out.K = 1.0 / z;

  SpecDefinition d;
  d.name = "reconstructed";
  d.support = support;
  d.density = [unnormalized, z](double x) { return unnormalized(x) / z; };
  d.gamma = gamma;
  d.eta = eta;
  out.spec = make_spec(std::move(d));
  return out;
}

SteinSolution standard_solution(SpecPtr spec, const TestFunction& h) {
  const DistributionSpec& sp = *spec;
  const double eh = sp.expectation(h.as_function());
  SteinSolution::Parts parts;
  parts.spec = spec;
  parts.h = h;
  parts.eh = eh;
  RealFunction hf = h.as_function();
  parts.numerator = [spec, hf, eh](double x) {
    return signed_left_integral(*spec, [&](double t) { return hf(t) - eh; }, x, "standard_solution");
  };
  parts.weight = [spec](double x) { return spec->weight(x); };
  const SupportInterval& s = sp.support();
  const double scale_lo = std::min(1.0, sp.median() - sp.grid_lower());
  const double scale_hi = std::min(1.0, sp.grid_upper() - sp.median());
  if (s.lower_finite()) {
    double ga = sp.gamma_at(Endpoint::kLower);
    std::optional<double> lim = h.lower_limit();
    if (!lim) {
      EndpointLimit l = numeric_limit(hf, s.lower, 1.0, scale_lo);
      lim = l.value;
      parts.limits_converged = parts.limits_converged && l.converged;
    }
    if (ga != 0.0 && std::isfinite(ga)) parts.lower_value = (*lim - eh) / ga;
  }
  if (s.upper_finite()) {
    double gb = sp.gamma_at(Endpoint::kUpper);
    std::optional<double> lim = h.upper_limit();
    if (!lim) {
      EndpointLimit l = numeric_limit(hf, s.upper, -1.0, scale_hi);
      lim = l.value;
      parts.limits_converged = parts.limits_converged && l.converged;
    }
    if (gb != 0.0 && std::isfinite(gb)) parts.upper_value = (*lim - eh) / gb;
  }
  return SteinSolution(std::move(parts));
}

double kolmogorov_sup(const DistributionSpec& spec, double z) {
  const SupportInterval& s = spec.support();
  if (z <= s.lower) return 1.0 / spec.gamma_at(Endpoint::kLower);
  if (z >= s.upper) return -1.0 / spec.gamma_at(Endpoint::kUpper);
  return spec.cdf(z) * spec.survival(z) / spec.weight(z);
}

KolmogorovSolution kolmogorov_solution(SpecPtr spec, double z) {
  const DistributionSpec& sp = *spec;
  if (!sp.support().contains_open(z)) throw DomainError("kolmogorov_solution: z must lie in the open support");
  const double fz = sp.cdf(z);
  const double sz = sp.survival(z);
  SteinSolution::Parts parts;
  parts.spec = spec;
  parts.h = TestFunction::indicator_below(z);
  parts.eh = fz;
  parts.numerator = [spec, z, fz, sz](double x) {
    return x <= z ? spec->cdf(x) * sz : fz * spec->survival(x);
  };
  parts.weight = [spec](double x) { return spec->weight(x); };
  if (sp.support().lower_finite()) parts.lower_value = sz / sp.gamma_at(Endpoint::kLower);
  if (sp.support().upper_finite()) parts.upper_value = -fz / sp.gamma_at(Endpoint::kUpper);
  return {SteinSolution(std::move(parts)), kolmogorov_sup(sp, z)};
}

MeasureWindow measure_window(const DistributionSpec& spec, int order) {
  double lo = spec.grid_lower();
  double hi = spec.grid_upper();
  if (order >= 1) {
    double delta = (order == 1 ? 1e-4 : 1e-3) * (hi - lo);
    if (spec.support().lower_finite()) lo += delta;
    if (spec.support().upper_finite()) hi -= delta;
  }
  return {lo, hi};
}

BoundReport bound_bounded(SpecPtr spec, const TestFunction& h, int grid_size) {
  const DistributionSpec& sp = *spec;
  SteinSolution g = standard_solution(spec, h);
  BoundReport r;
  r.name = "sup|g| (bounded h)";
  r.order = 0;
  double htilde_norm;
  if (h.norm(0) && !h.norm_estimated(0)) {
    htilde_norm = *h.norm(0);
  } else {
    htilde_norm = estimate_sup([&](double x) { return g.h_tilde(x); }, sp.grid_lower(), sp.grid_upper(), grid_size).value;
    r.advisory = true;
  }
  r.bound = htilde_norm / (2.0 * sp.weight(sp.median()));
  MeasureWindow w = measure_window(sp, 0);
  SupEstimate est = estimate_sup([&](double x) { return g(x); }, w.lo, w.hi, grid_size);
  r.estimate = est.value;
  r.argmax = est.argmax;
  r.refinement_gap = est.refinement_gap;
  r.tolerance = 1e-9 * r.bound + 1e-12;
  r.holds = r.estimate <= r.bound + r.tolerance;
  r.at_truncation = est.at_boundary && !(sp.support().lower_finite() && sp.support().upper_finite());
  return r;
}

LipschitzPointBound bound_lipschitz(const DistributionSpec& spec, const TestFunction& h, double x) {
  if (!spec.mean()) throw SpecError("bound_lipschitz: E|Z| must be finite");
  auto n1 = h.norm(1);
  if (!n1) throw SmoothnessError("bound_lipschitz: test function needs a declared or estimated ||h'||");
  const double ez = *spec.mean();
  const double gx = spec.gamma(x);
  const double p = spec.density(x);
  const double I = spec.weight(x);
  LipschitzPointBound out;
  double num_a = signed_left_integral(spec, [ez](double t) { return ez - t; }, x, "bound_lipschitz");
  double int_f = require_converged(spec.integrate_left([x](double t) { return x - t; }, x), "int F");
  double int_1f = require_converged(spec.integrate_right([x](double t) { return t - x; }, x), "int 1-F");
  out.H = require_converged(spec.integrate_left([&](double t) { return spec.gamma(t) - gx; }, x), "H");
  out.G = require_converged(spec.integrate_right([&](double t) { return gx - spec.gamma(t); }, x), "G");
  out.g_factor = num_a / I;
  out.gprime_factor = (int_f * out.G + int_1f * out.H) * p / (I * I);
  out.g_bound = *n1 * out.g_factor;
  out.gprime_bound = *n1 * out.gprime_factor;
  return out;
}

double stein_kernel(const DistributionSpec& spec, double x) {
  if (!spec.mean()) throw SpecError("stein_kernel: E|Z| must be finite");
  const SupportInterval& s = spec.support();
  if ((s.lower_finite() && x <= s.lower) || (s.upper_finite() && x >= s.upper)) return 0.0;
  const double ez = *spec.mean();
  return signed_left_integral(spec, [ez](double t) { return ez - t; }, x, "stein_kernel") / spec.density(x);
}

double characterization_residual(const DistributionSpec& spec, const TestFunction& f, const Measure& measure) {
  auto integrand = [&](double x) { return spec.eta(x) * f.derivative(1, x) + spec.gamma(x) * f(x); };
  if (std::holds_alternative<std::monostate>(measure)) return spec.expectation(integrand);
  if (const auto* sm = std::get_if<SampleMeasure>(&measure)) {
    if (sm->points.empty()) throw DomainError("characterization_residual: empty sample");
    double acc = 0.0;
    for (double x : sm->points) acc += integrand(x);
    return acc / static_cast<double>(sm->points.size());
  }
  const auto& dm = std::get<DiscreteMeasure>(measure);
  if (dm.points.size() != dm.weights.size()) throw DomainError("characterization_residual: size mismatch");
  double acc = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < dm.points.size(); ++i) {
    if (dm.weights[i] == 0.0) continue;
    acc += dm.weights[i] * integrand(dm.points[i]);
    mass += dm.weights[i];
  }
  return acc / mass;
}

SpecPtr derivative_lift(const DistributionSpec& spec) {
  const SpecDefinition& parent = spec.definition();
  double c = spec.expectation([&spec](double x) { return spec.eta(x); });
  if (!(c > 0.0) || !std::isfinite(c)) throw ConvergenceError("derivative_lift: normalization diverged", 0, c);
  // Keep the parent alive inside the closures.
  auto keep = std::make_shared<DistributionSpec>(spec);
  SpecDefinition d;
  d.name = "lift(" + spec.name() + ")";
  d.support = parent.support;
  d.density = [keep, c](double x) { return keep->weight(x) / c; };
  d.gamma = [keep](double x) { return keep->eta_derivative(x) + keep->gamma(x); };
  if (std::isfinite(parent.lower_power)) d.lower_power = parent.lower_power + 1.0;
  if (std::isfinite(parent.upper_power)) d.upper_power = parent.upper_power + 1.0;
  if (parent.eta && parent.density_from_lower && parent.support.lower_finite()) {
    const double a = parent.support.lower;
    d.density_from_lower = [keep, a, c](double s) {
      return keep->definition().eta(a + s) * keep->definition().density_from_lower(s) / c;
    };
  }
  if (parent.eta && parent.density_from_upper && parent.support.upper_finite()) {
    const double b = parent.support.upper;
    d.density_from_upper = [keep, b, c](double s) {
      return keep->definition().eta(b - s) * keep->definition().density_from_upper(s) / c;
    };
  }
  return make_spec(std::move(d));
}

TestFunction lifted_test_function(const SteinSolution& solution) {
  if (!solution.h().has_derivative(1)) {
    throw SmoothnessError("lifted_test_function: h needs a first derivative");
  }
  SpecPtr spec = solution.spec_ptr();
  TestFunction h = solution.h();
  TestFunction h2("h2(" + h.name() + ")",
                  [solution, spec, h](double x) {
                    return h.derivative(1, x) - spec->gamma_derivative(x) * solution(x);
                  },
                  Smoothness::kLipschitz);
  return h2;
}

double plugin_bound(const PairRegressionReport& r, const PluginNorms& n) {
  if (!(r.lambda > 0.0)) throw DomainError("plugin_bound: lambda must be positive");
  return n.f2 / (6.0 * r.lambda) * r.E_abs_cube + n.f * r.E_abs_R + n.f1 * r.E_abs_S;
}

}  // namespace steinpairs
