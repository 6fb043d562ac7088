#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "steinpairs/quadrature.hpp"

namespace steinpairs {

enum class Endpoint { kLower, kUpper };

struct SupportInterval {
  double lower;
  double upper;

  SupportInterval(double lo, double hi);
  bool lower_finite() const { return std::isfinite(lower); }
  bool upper_finite() const { return std::isfinite(upper); }
  bool contains_open(double x) const { return x > lower && x < upper; }
};

// Everything a caller can supply about a target law. Only support, density
// and gamma are required; the rest are accuracy aids.
struct SpecDefinition {
  std::string name = "custom";
  SupportInterval support{0.0, 1.0};
  RealFunction density;             // p on (a,b), normalized
  RealFunction gamma;               // nonincreasing coefficient on the closure
  RealFunction log_density;         // optional
  RealFunction psi;                 // optional (log p)'
  RealFunction gamma_derivative;    // optional
  RealFunction eta;                 // optional closed form of I/p
  RealFunction eta_derivative;      // optional
  RealFunction density_from_lower;  // optional s -> p(a + s), accurate for small s
  RealFunction density_from_upper;  // optional s -> p(b - s)
  RealFunction cdf;                 // optional
  RealFunction survival;            // optional 1 - F
  // p(a + s) ~ s^(power - 1) as s -> 0; NaN when unknown.
  double lower_power = std::numeric_limits<double>::quiet_NaN();
  double upper_power = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> known_mean;
  std::optional<double> known_median;
};

struct SpecOptions {
  QuadratureOptions quadrature{0.0, 1e-12, 4000};
  double tail_mass = 1e-14;  // truncation mass for infinite ends
};

// Immutable target law with cached derived quantities; all caches are
// filled by the constructor.
class DistributionSpec {
 public:
  explicit DistributionSpec(SpecDefinition def, SpecOptions opts = {});

  const std::string& name() const noexcept { return def_.name; }
  const SupportInterval& support() const noexcept { return def_.support; }
  const SpecDefinition& definition() const noexcept { return def_; }
  const SpecOptions& options() const noexcept { return opts_; }

  double density(double x) const { return def_.density(x); }
  double gamma(double x) const { return def_.gamma(x); }
  // gamma at an endpoint, taking the one-sided limit for infinite ends.
  double gamma_at(Endpoint e) const;
  double gamma_derivative(double x) const;
  bool has_closed_eta() const noexcept { return static_cast<bool>(def_.eta); }
  // eta(x); closed form when supplied, else I(x)/p(x). Zero at finite ends.
  double eta(double x) const;
  double eta_derivative(double x) const;
  // I(x) = eta(x) p(x) via the closed form when available.
  double weight(double x) const;

  double cdf(double x) const;
  double survival(double x) const;

  // Integral of f(t) p(t) over (a, x] and [x, b).
  QuadratureResult integrate_left(const RealFunction& f, double x) const;
  QuadratureResult integrate_right(const RealFunction& f, double x) const;
  // Integral of f over (a, x] and [x, b) without the density weight.
  QuadratureResult integrate_plain_left(const RealFunction& f, double x) const;
  QuadratureResult integrate_plain_right(const RealFunction& f, double x) const;
  double expectation(const RealFunction& f) const;

  double normalization() const noexcept { return normalization_; }
  double median() const noexcept { return median_; }
  std::optional<double> mean() const noexcept { return mean_; }
  std::optional<double> x0() const noexcept { return x0_; }
  // Grid window: the support itself at finite ends, quantile cutoffs at
  // infinite ends.
  double grid_lower() const noexcept { return grid_lower_; }
  double grid_upper() const noexcept { return grid_upper_; }

 private:
  double density_from_lower(double s) const;
  double density_from_upper(double s) const;
  double split_point() const;

 public:
  // I(x) by quadrature of gamma*p over the shorter tail (split at the median).
  QuadratureResult quadrature_I(double x) const;

 private:

  SpecDefinition def_;
  SpecOptions opts_;
  double normalization_ = 1.0;
  double median_ = 0.0;
  std::optional<double> mean_;
  std::optional<double> x0_;
  double grid_lower_ = 0.0;
  double grid_upper_ = 1.0;
};

using SpecPtr = std::shared_ptr<const DistributionSpec>;

SpecPtr make_spec(SpecDefinition def, SpecOptions opts = {});

// Locates sup{x : gamma(x) > 0} by bisection on a nonincreasing gamma.
std::optional<double> locate_sign_change(const RealFunction& gamma, double lo, double hi, int grid_size = 513);

}  // namespace steinpairs
