#include "steinpairs/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "steinpairs/errors.hpp"

namespace steinpairs {

SupportInterval::SupportInterval(double lo, double hi) : lower(lo), upper(hi) {
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
    throw DomainError("SupportInterval: lower must be < upper");
  }
}

std::optional<double> locate_sign_change(const RealFunction& gamma, double lo, double hi, int grid_size) {
  if (grid_size < 2) grid_size = 2;
  double prev = lo;
  if (!(gamma(lo) > 0.0)) return std::nullopt;
  double next = hi;
  bool found = false;
  for (int i = 1; i < grid_size; ++i) {
    double x = lo + (hi - lo) * static_cast<double>(i) / (grid_size - 1);
    if (i == grid_size - 1) x = hi;
    if (!(gamma(x) > 0.0)) {
      next = x;
      found = true;
      break;
    }
    prev = x;
  }
  if (!found) return std::nullopt;
  double l = prev;
  double r = next;
  for (int it = 0; it < 300; ++it) {
    if (r - l <= 1e-13 * std::max(1.0, std::fabs(l))) break;
    double m = 0.5 * (l + r);
    if (!(m > l && m < r)) break;
    if (gamma(m) > 0.0) l = m; else r = m;
  }
  return 0.5 * (l + r);
}

DistributionSpec::DistributionSpec(SpecDefinition def, SpecOptions opts)
    : def_(std::move(def)), opts_(opts) {
  if (!def_.density || !def_.gamma) throw SpecError("DistributionSpec: density and gamma are required");
  const SupportInterval& s = def_.support;
  const double split = split_point();
  median_ = split;

  QuadratureResult left = integrate_left([](double) { return 1.0; }, split);
  QuadratureResult right = integrate_right([](double) { return 1.0; }, split);
  if (!left.converged || !right.converged) {
    throw ConvergenceError("DistributionSpec '" + def_.name + "': normalization integral diverged",
                           left.evaluations + right.evaluations, left.error + right.error);
  }
  normalization_ = left.value + right.value;

  grid_lower_ = s.lower;
  grid_upper_ = s.upper;
  if (!s.lower_finite()) {
    double step = 1.0;
    double c = split - step;
    while (cdf(c) > opts_.tail_mass && step < 1e12) {
      step *= 2.0;
      c = split - step;
    }
    double inner = split - step / 2.0;
    for (int i = 0; i < 60; ++i) {
      double m = 0.5 * (c + inner);
      if (cdf(m) > opts_.tail_mass) inner = m; else c = m;
    }
    grid_lower_ = c;
  }
  if (!s.upper_finite()) {
    double step = 1.0;
    double c = split + step;
    while (survival(c) > opts_.tail_mass && step < 1e12) {
      step *= 2.0;
      c = split + step;
    }
    double inner = split + step / 2.0;
    for (int i = 0; i < 60; ++i) {
      double m = 0.5 * (c + inner);
      if (survival(m) > opts_.tail_mass) inner = m; else c = m;
    }
    grid_upper_ = c;
  }

  if (def_.known_median) {
    median_ = *def_.known_median;
  } else {
    double lo = grid_lower_;
    double hi = grid_upper_;
    for (int i = 0; i < 200; ++i) {
      double m = 0.5 * (lo + hi);
      if (!(m > lo && m < hi)) break;
      if (hi - lo <= 1e-15 * std::max(1.0, std::fabs(m))) break;
      if (cdf(m) < 0.5) lo = m; else hi = m;
    }
    median_ = 0.5 * (lo + hi);
  }

  if (def_.known_mean) {
    mean_ = def_.known_mean;
  } else {
    QuadratureResult a = integrate_left([](double x) { return x; }, median_);
    QuadratureResult b = integrate_right([](double x) { return x; }, median_);
    if (a.converged && b.converged) mean_ = a.value + b.value;
  }

  x0_ = locate_sign_change(def_.gamma, grid_lower_, grid_upper_);
}

SpecPtr make_spec(SpecDefinition def, SpecOptions opts) {
  return std::make_shared<const DistributionSpec>(std::move(def), opts);
}

double DistributionSpec::split_point() const {
  const SupportInterval& s = def_.support;
  if (s.lower_finite() && s.upper_finite()) return 0.5 * (s.lower + s.upper);
  if (s.lower_finite()) return s.lower + 1.0;
  if (s.upper_finite()) return s.upper - 1.0;
  return 0.0;
}

double DistributionSpec::density_from_lower(double s) const {
  if (def_.density_from_lower) return def_.density_from_lower(s);
  return def_.density(def_.support.lower + s);
}

double DistributionSpec::density_from_upper(double s) const {
  if (def_.density_from_upper) return def_.density_from_upper(s);
  return def_.density(def_.support.upper - s);
}

QuadratureResult DistributionSpec::integrate_left(const RealFunction& f, double x) const {
  const SupportInterval& s = def_.support;
  if (x <= s.lower) return {0.0, 0.0, 0, 0, true};
  if (x >= s.upper) x = s.upper;
  if (s.lower_finite()) {
    const double a = s.lower;
    return integrate_from_endpoint(
        [&](double t) {
          double p = density_from_lower(t);
          return p == 0.0 ? 0.0 : f(a + t) * p;
        },
        x - a, def_.lower_power, opts_.quadrature);
  }
  if (std::isinf(x)) {
    QuadratureResult l = integrate_left(f, 0.0);
    QuadratureResult r = integrate_semi_infinite([&](double t) { double p = def_.density(t); return p == 0.0 ? 0.0 : f(t) * p; }, opts_.quadrature);
    return {l.value + r.value, l.error + r.error, l.evaluations + r.evaluations, l.intervals + r.intervals,
            l.converged && r.converged};
  }
  return integrate_semi_infinite(
      [&](double t) {
        double p = def_.density(x - t);
        return p == 0.0 ? 0.0 : f(x - t) * p;
      },
      opts_.quadrature);
}

QuadratureResult DistributionSpec::integrate_right(const RealFunction& f, double x) const {
  const SupportInterval& s = def_.support;
  if (x >= s.upper) return {0.0, 0.0, 0, 0, true};
  if (x <= s.lower) x = s.lower;
  if (s.upper_finite()) {
    const double b = s.upper;
    return integrate_from_endpoint(
        [&](double t) {
          double p = density_from_upper(t);
          return p == 0.0 ? 0.0 : f(b - t) * p;
        },
        b - x, def_.upper_power, opts_.quadrature);
  }
  if (std::isinf(x)) {
    QuadratureResult r = integrate_right(f, 0.0);
    QuadratureResult l = integrate_semi_infinite([&](double t) { double p = def_.density(-t); return p == 0.0 ? 0.0 : f(-t) * p; }, opts_.quadrature);
    return {l.value + r.value, l.error + r.error, l.evaluations + r.evaluations, l.intervals + r.intervals,
            l.converged && r.converged};
  }
  return integrate_semi_infinite(
      [&](double t) {
        double p = def_.density(x + t);
        return p == 0.0 ? 0.0 : f(x + t) * p;
      },
      opts_.quadrature);
}

QuadratureResult DistributionSpec::integrate_plain_left(const RealFunction& f, double x) const {
  const SupportInterval& s = def_.support;
  if (x <= s.lower) return {0.0, 0.0, 0, 0, true};
  if (s.lower_finite()) {
    const double a = s.lower;
    return integrate_from_endpoint([&](double t) { return f(a + t); }, x - a, std::nan(""), opts_.quadrature);
  }
  return integrate_semi_infinite([&](double t) { return f(x - t); }, opts_.quadrature);
}

QuadratureResult DistributionSpec::integrate_plain_right(const RealFunction& f, double x) const {
  const SupportInterval& s = def_.support;
  if (x >= s.upper) return {0.0, 0.0, 0, 0, true};
  if (s.upper_finite()) {
    const double b = s.upper;
    return integrate_from_endpoint([&](double t) { return f(b - t); }, b - x, std::nan(""), opts_.quadrature);
  }
  return integrate_semi_infinite([&](double t) { return f(x + t); }, opts_.quadrature);
}

double DistributionSpec::expectation(const RealFunction& f) const {
  QuadratureResult l = integrate_left(f, median_);
  QuadratureResult r = integrate_right(f, median_);
  require_converged(l, "expectation (left part)");
  require_converged(r, "expectation (right part)");
  return l.value + r.value;
}

double DistributionSpec::cdf(double x) const {
  const SupportInterval& s = def_.support;
  if (x <= s.lower) return 0.0;
  if (x >= s.upper) return 1.0;
  if (def_.cdf) return def_.cdf(x);
  if (x <= median_) return integrate_left([](double) { return 1.0; }, x).value;
  return 1.0 - integrate_right([](double) { return 1.0; }, x).value;
}

double DistributionSpec::survival(double x) const {
  const SupportInterval& s = def_.support;
  if (x <= s.lower) return 1.0;
  if (x >= s.upper) return 0.0;
  if (def_.survival) return def_.survival(x);
  if (x <= median_) return 1.0 - integrate_left([](double) { return 1.0; }, x).value;
  return integrate_right([](double) { return 1.0; }, x).value;
}

QuadratureResult DistributionSpec::quadrature_I(double x) const {
  const SupportInterval& s = def_.support;
  if (x <= s.lower || x >= s.upper) return {0.0, 0.0, 0, 0, true};
  if (x <= median_) return integrate_left(def_.gamma, x);
  QuadratureResult r = integrate_right(def_.gamma, x);
  r.value = -r.value;
  return r;
}

double DistributionSpec::gamma_at(Endpoint e) const {
  if (e == Endpoint::kLower) return def_.gamma(def_.support.lower_finite() ? def_.support.lower : grid_lower_);
  return def_.gamma(def_.support.upper_finite() ? def_.support.upper : grid_upper_);
}

double DistributionSpec::eta(double x) const {
  const SupportInterval& s = def_.support;
  if ((s.lower_finite() && x <= s.lower) || (s.upper_finite() && x >= s.upper)) return 0.0;
  if (def_.eta) return def_.eta(x);
  double p = def_.density(x);
  return require_converged(quadrature_I(x), "eta") / p;
}

double DistributionSpec::weight(double x) const {
  const SupportInterval& s = def_.support;
  if (x <= s.lower || x >= s.upper) return 0.0;
  if (def_.eta) return def_.eta(x) * def_.density(x);
  return require_converged(quadrature_I(x), "I(x)");
}

namespace {

double central_difference(const RealFunction& f, double x, double lo, double hi) {
  double h = 1e-5 * std::max(1.0, std::fabs(x));
  if (std::isfinite(lo)) h = std::min(h, 0.5 * (x - lo));
  if (std::isfinite(hi)) h = std::min(h, 0.5 * (hi - x));
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

double DistributionSpec::gamma_derivative(double x) const {
  if (def_.gamma_derivative) return def_.gamma_derivative(x);
  return central_difference(def_.gamma, x, def_.support.lower, def_.support.upper);
}

double DistributionSpec::eta_derivative(double x) const {
  if (def_.eta_derivative) return def_.eta_derivative(x);
  if (def_.psi) return def_.gamma(x) - def_.psi(x) * eta(x);
  return central_difference([this](double t) { return eta(t); }, x, def_.support.lower, def_.support.upper);
}

}  // namespace steinpairs
