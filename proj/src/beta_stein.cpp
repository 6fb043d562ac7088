#include "steinpairs/beta_stein.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "steinpairs/distributions.hpp"
#include "steinpairs/errors.hpp"
#include "steinpairs/sup_norm.hpp"

namespace steinpairs {

BetaSteinContext::BetaSteinContext(BetaParams p) : params_(p), spec_(beta_spec(p)) {}

double c_constant(const BetaParams& p) {
  const double a = p.a();
  const double b = p.b();
  if (a == b) {
    if (a < 1.0) return 4.0;
    return 2.0 * a * std::sqrt(std::numbers::pi) * std::exp(log_gamma(a) - log_gamma(a + 0.5));
  }
  double factor;
  if (a <= 1.0 && b <= 1.0) {
    factor = std::exp(log_beta(p));
  } else if (a <= 1.0) {
    factor = 1.0 / a;
  } else if (b <= 1.0) {
    factor = 1.0 / b;
  } else {
    factor = 1.0 / (a * b * std::exp(log_beta(p)));
  }
  return 2.0 * (a + b) * factor;
}

namespace {

// Exact solution for polynomial h: with m_j = E[Z^j],
// g(x) = -sum_i x^i / ((a+i) m_i) * sum_{j>i} c_j m_j.
std::vector<double> polynomial_solution(const BetaParams& p, const std::vector<double>& c) {
  const double a = p.a();
  const double s = p.a() + p.b();
  const std::size_t deg = c.size() - 1;
  std::vector<double> g(deg == 0 ? 1 : deg, 0.0);
  for (std::size_t i = 0; i < deg; ++i) {
    // sum_{j>i} c_j m_j / m_i with m_j/m_i = prod_{l=i}^{j-1} (a+l)/(s+l)
    double acc = 0.0;
    double ratio = 1.0;
    for (std::size_t j = i + 1; j <= deg; ++j) {
      ratio *= (a + static_cast<double>(j - 1)) / (s + static_cast<double>(j - 1));
      acc += c[j] * ratio;
    }
    g[i] = -acc / (a + static_cast<double>(i));
  }
  return g;
}

double polynomial_mean(const BetaParams& p, const std::vector<double>& c) {
  double m = 1.0;
  double acc = c[0];
  for (std::size_t j = 1; j < c.size(); ++j) {
    m *= (p.a() + static_cast<double>(j - 1)) / (p.a() + p.b() + static_cast<double>(j - 1));
    acc += c[j] * m;
  }
  return acc;
}

}  // namespace

SteinSolution solve(const BetaSteinContext& ctx, const TestFunction& h) {
  const auto& poly = h.polynomial_coefficients();
  if (!poly || poly->size() > 7) return standard_solution(ctx.spec(), h);
  const BetaParams& p = ctx.params();
  std::vector<double> coeffs = *poly;
  std::vector<double> gpoly = polynomial_solution(p, coeffs);
  std::vector<double> dpoly = poly_derivative(gpoly);
  const double eh = polynomial_mean(p, coeffs);
  SteinSolution::Parts parts;
  parts.spec = ctx.spec();
  parts.h = h;
  parts.eh = eh;
  parts.exact_value = [gpoly](double x) { return poly_eval(gpoly, x); };
  parts.exact_derivative = [dpoly](double x) { return poly_eval(dpoly, x); };
  SpecPtr spec = ctx.spec();
  parts.weight = [spec](double x) { return spec->weight(x); };
  parts.numerator = [spec, gpoly](double x) { return poly_eval(gpoly, x) * spec->weight(x); };
  parts.lower_value = (h(0.0) - eh) / p.a();
  parts.upper_value = (h(1.0) - eh) / (-p.b());
  return SteinSolution(std::move(parts));
}

double solution_derivative(const BetaSteinContext& ctx, const SteinSolution& g, int k, double x) {
  if (k < 0) throw DomainError("solution_derivative: negative order");
  const double a = ctx.params().a();
  const double b = ctx.params().b();
  const double s = a + b;
  const TestFunction& h = g.h();
  if (k == 0) return g(x);
  if (k >= 2 && !h.has_derivative(k - 1)) {
    throw SmoothnessError("solution_derivative: h needs derivative of order " + std::to_string(k - 1));
  }
  if (x <= 0.0 || x >= 1.0) {
    const bool lower = x <= 0.0;
    const double e = lower ? 0.0 : 1.0;
    double v = g(e);
    for (int j = 1; j <= k; ++j) {
      if (!h.has_derivative(j)) {
        throw SmoothnessError("solution_derivative: endpoint value needs h^(" + std::to_string(j) + ")");
      }
      double rhs = h.derivative(j, e) + j * (s + j - 1.0) * v;
      v = lower ? rhs / (a + j) : -rhs / (b + j);
    }
    return v;
  }
  if (const auto& poly = h.polynomial_coefficients(); poly && poly->size() <= 7) {
    std::vector<double> d = polynomial_solution(ctx.params(), *poly);
    for (int j = 0; j < k; ++j) d = poly_derivative(d);
    return poly_eval(d, x);
  }
  if (k == 1) return g.derivative(x);
  const double eta = x * (1.0 - x);
  double prev2 = g(x);            // g^(j-2)
  double prev1 = g.derivative(x);  // g^(j-1)
  for (int j = 2; j <= k; ++j) {
    // eta g^(j) = h_j - gamma_{j-1} g^(j-1), h_j = h^(j-1) + (j-1)(a+b+j-2) g^(j-2).
    double hj = h.derivative(j - 1, x) + (j - 1) * (s + j - 2.0) * prev2;
    double gam = (a + j - 1.0) - (s + 2.0 * (j - 1.0)) * x;
    double cur = (hj - gam * prev1) / eta;
    prev2 = prev1;
    prev1 = cur;
  }
  return prev1;
}

double derivative_bound(const BetaParams& p, const std::vector<double>& norms, int m) {
  if (m < 1) throw DomainError("derivative_bound: order must be >= 1");
  if (static_cast<int>(norms.size()) <= m) throw DomainError("derivative_bound: need norms up to order m");
  const double s = p.a() + p.b();
  auto ck = [&p](int k) { return c_constant(p.shifted(k)); };
  if (m < 8) {
    double total = 0.0;
    for (int j = 1; j <= m; ++j) {
      double prod = 1.0;
      for (int l = j; l <= m - 1; ++l) prod *= l * (s + l - 1.0) * ck(l - 1);
      total += prod * norms[static_cast<std::size_t>(j)];
    }
    return ck(m - 1) * total;
  }
  std::vector<double> logs;
  for (int j = 1; j <= m; ++j) {
    double nj = norms[static_cast<std::size_t>(j)];
    if (nj == 0.0) continue;
    double lp = std::log(nj);
    for (int l = j; l <= m - 1; ++l) lp += std::log(l * (s + l - 1.0)) + std::log(ck(l - 1));
    logs.push_back(lp);
  }
  if (logs.empty()) return 0.0;
  double mx = *std::max_element(logs.begin(), logs.end());
  double acc = 0.0;
  for (double v : logs) acc += std::exp(v - mx);
  return std::exp(std::log(ck(m - 1)) + mx + std::log(acc));
}

double derivative_bound_recursive(const BetaParams& p, const std::vector<double>& norms, int m) {
  if (m < 1) throw DomainError("derivative_bound_recursive: order must be >= 1");
  const double s = p.a() + p.b();
  double bk = c_constant(p) * norms[1];
  for (int k = 2; k <= m; ++k) {
    bk = c_constant(p.shifted(k - 1)) * (norms[static_cast<std::size_t>(k)] + (k - 1) * (s + k - 2.0) * bk);
  }
  return bk;
}

double second_derivative_bound(const BetaParams& p, double norm_h1, double norm_h2) {
  const double c0 = c_constant(p);
  const double c1 = c_constant(p.shifted(1));
  return c1 * norm_h2 + (p.a() + p.b()) * c1 * c0 * norm_h1;
}

std::vector<BoundReport> bound_suite(const BetaSteinContext& ctx, const TestFunction& h_in, int m, int grid_size) {
  if (m < 0) throw DomainError("bound_suite: order must be >= 0");
  if (h_in.order() < m) {
    throw SmoothnessError(std::string("bound_suite: class ") + to_string(h_in.smoothness()) + " of '" +
                          h_in.name() + "' does not cover order " + std::to_string(m));
  }
  const BetaParams& p = ctx.params();
  TestFunction h = h_in.with_estimated_norms(0.0, 1.0);
  SteinSolution g = solve(ctx, h);
  bool advisory = false;
  std::vector<double> norms(static_cast<std::size_t>(m) + 1, 0.0);
  for (int j = 1; j <= m; ++j) {
    norms[static_cast<std::size_t>(j)] = *h.norm(j);
    advisory = advisory || h.norm_estimated(j);
  }
  std::vector<BoundReport> out;
  for (int k = 0; k <= m; ++k) {
    BoundReport r;
    r.order = k;
    r.advisory = advisory;
    if (k == 0 && m == 0) {
      double ht;
      if (h.norm(0) && !h.norm_estimated(0)) {
        ht = *h.norm(0);
      } else {
        ht = estimate_sup([&](double x) { return g.h_tilde(x); }, 0.0, 1.0, grid_size).value;
        r.advisory = true;
      }
      const double med = ctx.spec()->median();
      r.name = "sup|g| <= ||h~||/(2m(1-m)p(m))";
      r.bound = ht / (2.0 * med * (1.0 - med) * ctx.spec()->density(med));
    } else if (k == 0) {
      r.name = "sup|g| <= ||h'||/(a+b)";
      r.bound = norms[1] / (p.a() + p.b());
    } else if (k == 1) {
      r.name = "sup|g'| <= C(a,b)||h'||";
      r.bound = c_constant(p) * norms[1];
    } else {
      r.name = "sup|g^(" + std::to_string(k) + ")| recursion bound";
      r.bound = derivative_bound(p, norms, k);
    }
    const double delta = k == 0 ? 0.0 : (k == 1 ? 1e-4 : 1e-3);
    const bool exact = static_cast<bool>(h.polynomial_coefficients()) && h.polynomial_coefficients()->size() <= 7;
    const double lo = exact ? 0.0 : delta;
    const double hi = exact ? 1.0 : 1.0 - delta;
    SupEstimate est = estimate_sup([&](double x) { return solution_derivative(ctx, g, k, x); }, lo, hi, grid_size);
    r.estimate = est.value;
    r.argmax = est.argmax;
    r.refinement_gap = est.refinement_gap;
    if (!exact) {
      // Endpoint limits are exact; include them when h has the derivatives.
      try {
        for (double e : {0.0, 1.0}) {
          double v = std::fabs(solution_derivative(ctx, g, k, e));
          if (v > r.estimate) {
            r.estimate = v;
            r.argmax = e;
          }
        }
      } catch (const SmoothnessError&) {
        r.note = "endpoint limits unavailable";
      }
    }
    r.tolerance = 1e-9 * r.bound + 1e-12;
    r.holds = r.estimate <= r.bound + r.tolerance;
    out.push_back(r);
  }
  return out;
}

double theorem_mt_bound(int n, const BetaParams& p, double norm_h1, double norm_h2) {
  if (n < 1) throw DomainError("theorem_mt_bound: n must be >= 1");
  const double a = p.a();
  const double b = p.b();
  const double c0 = c_constant(p);
  const double c1 = c_constant(p.shifted(1));
  const double nn = static_cast<double>(n);
  const double corr = 1.0 + (a + b - 1.0) / nn;
  return c0 / nn * norm_h1 * (a * b / (a + b) + (a + b) * c1 / 6.0 * corr) + c1 / (6.0 * nn) * norm_h2 * corr;
}

double beta_plugin_bound(double lambda, double E_abs_R, double E_abs_S, double E_cube, const BetaParams& p,
                         double norm_h1, double norm_h2) {
  if (!(lambda > 0.0)) throw DomainError("beta_plugin_bound: lambda must be positive");
  const double s = p.a() + p.b();
  const double c0 = c_constant(p);
  const double c1 = c_constant(p.shifted(1));
  return norm_h1 * (E_abs_R / s + c0 * E_abs_S) + (c1 * norm_h2 + s * c1 * c0 * norm_h1) / (6.0 * lambda) * E_cube;
}

double characterization_check(const BetaSteinContext& ctx, const TestFunction& f, const Measure& measure) {
  return characterization_residual(*ctx.spec(), f, measure);
}

double derivative_bound_ratio(const BetaSteinContext& ctx, double x) {
  TestFunction unit("x", [](double t) { return t; }, Smoothness::kLipschitz);
  unit.with_norm(1, 1.0);
  return bound_lipschitz(*ctx.spec(), unit, x).gprime_factor;
}

RatioExploration explore_derivative_ratio(const BetaSteinContext& ctx, int grid_size) {
  RatioExploration out;
  const double mn = std::min(ctx.params().a(), ctx.params().b());
  out.conjectured = 2.0 / (mn + 1.0);
  SupEstimate est = estimate_sup([&](double x) { return derivative_bound_ratio(ctx, x); }, 1e-6, 1.0 - 1e-6, grid_size);
  out.sup_ratio = est.value;
  out.argmax = est.argmax;
  return out;
}

}  // namespace steinpairs
