#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "steinpairs/beta_stein.hpp"
#include "steinpairs/distributions.hpp"
#include "steinpairs/errors.hpp"
#include "steinpairs/sup_norm.hpp"

using namespace steinpairs;

namespace {

const std::vector<double> kParamGrid = {0.3, 1.0, 2.5, 7.0};

// Same function as a polynomial fixture but without the coefficient list,
// so solve() takes the quadrature route.
TestFunction opaque(const TestFunction& h) {
  TestFunction t(h.name() + "-opaque", h.as_function(), h.smoothness(), h.order());
  for (int k = 1; k <= h.order(); ++k) {
    if (!h.has_derivative(k)) break;
    t.with_derivative(k, [h, k](double x) { return h.derivative(k, x); });
    if (h.norm(k)) t.with_norm(k, *h.norm(k));
  }
  return t;
}

}  // namespace

TEST_CASE("c_constant table") {
  CHECK(c_constant(BetaParams(0.5, 0.5)) == 4.0);
  CHECK(c_constant(BetaParams(1.0, 1.0)) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(c_constant(BetaParams(0.5, 2.0)) == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(c_constant(BetaParams(2.0, 2.0)) == doctest::Approx(16.0 / 3.0).epsilon(1e-14));
  CHECK(c_constant(BetaParams(3.0, 0.5)) == doctest::Approx(14.0).epsilon(1e-14));
  CHECK(c_constant(BetaParams(2.0, 3.0)) == doctest::Approx(20.0).epsilon(1e-13));
  CHECK(c_constant(BetaParams(0.5, 0.7)) == doctest::Approx(2.4 * boost::math::beta(0.5, 0.7)).epsilon(1e-13));
  const double a = 4.5;
  CHECK(c_constant(BetaParams(a, a)) ==
        doctest::Approx(2.0 * a * std::sqrt(std::numbers::pi) * boost::math::tgamma_delta_ratio(a, 0.5)).epsilon(1e-13));

  // The symmetric branch is keyed on exact equality; the generic branch
  // just off the diagonal tends to 2(2a)B(a,a), not 4.
  const double near = c_constant(BetaParams(0.5, 0.5 + 1e-12));
  CHECK(near == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-9));
  CHECK(near != doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("solve: polynomial solutions match the triangular oracle") {
  std::vector<std::vector<double>> polys = {{0.0, 1.0}, {1.0, -2.0, 3.0}, {0.5, 0.0, 0.0, -1.0, 2.0},
                                            {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0}};
  for (double a : kParamGrid) {
    for (double b : kParamGrid) {
      BetaSteinContext ctx(BetaParams(a, b));
      for (const auto& c : polys) {
        oracle::PolySolution ref = oracle::beta_polynomial_solution(c, a, b);
        SteinSolution g = solve(ctx, TestFunction::polynomial(c));
        CHECK(g.mean_h() == doctest::Approx(ref.eh).epsilon(1e-13));
        auto dref = oracle::differentiate(ref.g);
        for (double x : {0.0, 0.1, 0.5, 0.77, 1.0}) {
          CHECK(g(x) == doctest::Approx(oracle::horner(ref.g, x)).epsilon(1e-12));
          if (x > 0.0 && x < 1.0) CHECK(g.derivative(x) == doctest::Approx(oracle::horner(dref, x)).epsilon(1e-11));
        }
        CHECK(*g.lower_value() == doctest::Approx(oracle::horner(ref.g, 0.0)).epsilon(1e-12));
        CHECK(*g.upper_value() == doctest::Approx(oracle::horner(ref.g, 1.0)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("solve: closed examples") {
  for (auto [a, b] : {std::pair{2.0, 3.0}, std::pair{0.3, 7.0}, std::pair{0.5, 0.5}}) {
    BetaSteinContext ctx(BetaParams(a, b));
    SteinSolution exact = solve(ctx, TestFunction::polynomial({0.0, 1.0}));
    SteinSolution quad = solve(ctx, named_fixture("x"));
    for (double x : oracle::grid(0.0, 1.0, 15)) {
      CHECK(exact(x) == doctest::Approx(-1.0 / (a + b)).epsilon(1e-14));
      CHECK(quad(x) == doctest::Approx(-1.0 / (a + b)).epsilon(1e-9));
    }
    SteinSolution zero = solve(ctx, TestFunction::constant(2.0));
    for (double x : {0.0, 0.4, 1.0}) CHECK(zero(x) == 0.0);
  }
  // h(0) = 1, E h = 0.4 under Beta(2,2): h = 1 - 1.2x, g(0) = 0.6/2.
  BetaSteinContext ctx(BetaParams(2.0, 2.0));
  SteinSolution g = solve(ctx, TestFunction::polynomial({1.0, -1.2}));
  CHECK(g.mean_h() == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(g(0.0) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("solve: quadrature route against direct integration") {
  for (auto [a, b] : {std::pair{0.3, 0.7}, std::pair{2.5, 7.0}, std::pair{1.0, 1.0}}) {
    BetaSteinContext ctx(BetaParams(a, b));
    for (const char* name : {"sin3", "smoothstep", "absdev"}) {
      TestFunction h = named_fixture(name);
      SteinSolution g = solve(ctx, h);
      auto hf = h.as_function();
      // Split at the kink of absdev.
      double eh = oracle::beta_weighted(hf, a, b, 0.0, 0.5) + oracle::beta_weighted(hf, a, b, 0.5, 1.0);
      CHECK(g.mean_h() == doctest::Approx(eh).epsilon(1e-11));
      auto centered = [&](double t) { return hf(t) - eh; };
      for (double x : {0.02, 0.3, 0.6, 0.95}) {
        double num = x <= 0.5 ? oracle::beta_weighted(centered, a, b, 0.0, x)
                              : -oracle::beta_weighted(centered, a, b, x, 1.0);
        double ref = num / (x * (1.0 - x) * oracle::beta_pdf(x, a, b));
        INFO(std::string(name), " a=", a, " b=", b, " x=", x);
        CHECK(std::fabs(g(x) - ref) <= 1e-9 * std::max(1.0, std::fabs(ref)));
      }
    }
  }
  // Polynomials through the quadrature route agree with the exact route.
  BetaSteinContext ctx(BetaParams(0.3, 2.5));
  TestFunction p = TestFunction::polynomial({0.5, 0.0, 0.0, -1.0, 2.0});
  SteinSolution ge = solve(ctx, p);
  SteinSolution gq = solve(ctx, opaque(p));
  for (double x : oracle::grid(0.0, 1.0, 19)) CHECK(gq(x) == doctest::Approx(ge(x)).epsilon(1e-9));
}

TEST_CASE("interior values converge to the boundary values") {
  for (auto [a, b] : {std::pair{2.0, 3.0}, std::pair{0.5, 2.0}, std::pair{0.3, 0.3}}) {
    BetaSteinContext ctx(BetaParams(a, b));
    SteinSolution g = solve(ctx, named_fixture("sin3"));
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 10; k <= 30; ++k) {
      double eps = std::ldexp(1.0, -k);
      double gap = std::max(std::fabs(g(eps) - g(0.0)), std::fabs(g(1.0 - eps) - g(1.0)));
      CHECK(gap <= prev * 1.01 + 1e-12);
      prev = gap;
    }
    CHECK(prev < 1e-7);
  }
}

TEST_CASE("g' solves the lifted equation") {
  for (auto [a, b] : {std::pair{2.0, 3.0}, std::pair{0.5, 1.5}}) {
    BetaSteinContext ctx(BetaParams(a, b));
    for (const char* name : {"sin3", "logistic"}) {
      SteinSolution g = solve(ctx, named_fixture(name));
      TestFunction h2 = lifted_test_function(g);
      BetaSteinContext up = ctx.lifted();
      CHECK(up.params().a() == a + 1.0);
      CHECK(up.params().b() == b + 1.0);
      SteinSolution g2 = solve(up, h2);
      CHECK(std::fabs(g2.mean_h()) <= 1e-9);
      for (double x : oracle::grid(0.0, 1.0, 9)) {
        INFO(std::string(name), " x=", x);
        CHECK(std::fabs(g.derivative(x) - g2(x)) <= 1e-7);
      }
    }
  }
}

TEST_CASE("solution_derivative endpoint recursion") {
  for (auto [a, b] : {std::pair{2.0, 3.0}, std::pair{0.5, 1.5}}) {
    BetaSteinContext ctx(BetaParams(a, b));
    std::vector<double> c = {0.5, -1.0, 0.0, 2.0, 1.0};
    SteinSolution g = solve(ctx, TestFunction::polynomial(c));
    std::vector<double> d = oracle::beta_polynomial_solution(c, a, b).g;
    for (int k = 0; k <= 4; ++k) {
      for (double x : {0.0, 0.35, 1.0}) {
        CHECK(solution_derivative(ctx, g, k, x) == doctest::Approx(oracle::horner(d, x)).epsilon(1e-11));
      }
      d = oracle::differentiate(d);
    }
    // Smooth non-polynomial h: interior values approach the endpoint values
    // at a linear rate along 2^-j.
    SteinSolution gs = solve(ctx, named_fixture("sin"));
    for (int k = 1; k <= 2; ++k) {
      for (double e : {0.0, 1.0}) {
        const double end_value = solution_derivative(ctx, gs, k, e);
        double prev = std::numeric_limits<double>::infinity();
        for (int j = 5; j <= 11; ++j) {
          double eps = std::ldexp(1.0, -j);
          double gap = std::fabs(solution_derivative(ctx, gs, k, e == 0.0 ? eps : 1.0 - eps) - end_value);
          INFO("k=", k, " end=", e, " j=", j);
          CHECK(gap <= 0.6 * prev);
          prev = gap;
        }
        CHECK(prev <= 1e-2);
      }
    }
  }
}

TEST_CASE("Lipschitz bounds hold over the parameter grid") {
  for (double a : kParamGrid) {
    for (double b : kParamGrid) {
      BetaSteinContext ctx(BetaParams(a, b));
      for (const char* name : {"sin3", "smoothstep", "absdev", "x"}) {
        TestFunction h = named_fixture(name);
        auto reps = bound_suite(ctx, h, 1, 1025);
        REQUIRE(reps.size() == 2);
        INFO(std::string(name), " a=", a, " b=", b);
        CHECK(reps[0].bound == doctest::Approx(*h.norm(1) / (a + b)).epsilon(1e-15));
        CHECK(reps[1].bound == doctest::Approx(c_constant(BetaParams(a, b)) * *h.norm(1)).epsilon(1e-15));
        CHECK(reps[0].holds);
        CHECK(reps[1].holds);
        CHECK_FALSE(reps[0].advisory);
      }
    }
  }
}

TEST_CASE("bound_suite orders and classes") {
  BetaSteinContext sym(BetaParams(0.5, 0.5));
  auto r2 = bound_suite(sym, named_fixture("sin3"), 2, 1025);
  REQUIRE(r2.size() == 3);
  CHECK(r2[1].bound == doctest::Approx(4.0 * 3.0));
  CHECK(r2[2].bound == doctest::Approx(second_derivative_bound(BetaParams(0.5, 0.5), 3.0, 9.0)).epsilon(1e-15));
  for (const auto& r : r2) CHECK(r.holds);

  BetaSteinContext ctx(BetaParams(2.0, 3.0));
  TestFunction ind = TestFunction::indicator_below(0.3).with_norm(0, 1.0);
  auto r0 = bound_suite(ctx, ind, 0, 1025);
  REQUIRE(r0.size() == 1);
  const double m = beta_median(BetaParams(2.0, 3.0));
  CHECK(r0[0].bound == doctest::Approx(1.0 / (2.0 * m * (1.0 - m) * oracle::beta_pdf(m, 2.0, 3.0))).epsilon(1e-12));
  CHECK(r0[0].holds);

  auto r4 = bound_suite(ctx, TestFunction::polynomial({0.0, 0.0, 0.0, 1.0, -0.5}), 4, 1025);
  REQUIRE(r4.size() == 5);
  for (const auto& r : r4) CHECK(r.holds);

  CHECK_THROWS_AS(bound_suite(ctx, named_fixture("absdev"), 2), SmoothnessError);
  CHECK_THROWS_AS(bound_suite(ctx, TestFunction::indicator_below(0.5), 1), SmoothnessError);
}

TEST_CASE("order-m bound: closed form, recursion and second-order formula") {
  for (double a : kParamGrid) {
    for (double b : kParamGrid) {
      BetaParams p(a, b);
      std::vector<double> norms = {0.0, 1.3, 0.7, 2.0, 0.1, 5.0, 1.0, 1.0, 3.0, 0.5, 2.0, 1.0, 1.0};
      CHECK(derivative_bound(p, norms, 1) == doctest::Approx(c_constant(p) * 1.3).epsilon(1e-15));
      CHECK(derivative_bound(p, norms, 2) == doctest::Approx(second_derivative_bound(p, 1.3, 0.7)).epsilon(1e-12));
      for (int m = 1; m <= 12; ++m) {
        CHECK(derivative_bound(p, norms, m) == doctest::Approx(derivative_bound_recursive(p, norms, m)).epsilon(1e-12));
      }
    }
  }
  // Large orders stay finite in log space.
  std::vector<double> ones(61, 1.0);
  double big = derivative_bound(BetaParams(0.3, 0.3), ones, 60);
  CHECK(std::isfinite(big));
  CHECK(big > 1e100);
}

TEST_CASE("theorem_mt_bound") {
  const double e = 1e-6;
  for (int n : {1, 10, 100, 1000}) {
    double v = theorem_mt_bound(n, BetaParams(e, e), 1.0, 1.0);
    CHECK(std::fabs(v - 2.0 / (3.0 * n) * (1.0 - 1.0 / n)) <= 1e-4);
  }
  CHECK(theorem_mt_bound(50, BetaParams(2.0, 3.0), 0.0, 0.0) == 0.0);
  // Direct assembly for one case.
  const double c0 = 20.0;
  const double c1 = 2.0 * 7.0 / (3.0 * 4.0 * boost::math::beta(3.0, 4.0));
  const double n = 40.0;
  const double corr = 1.0 + 4.0 / n;
  double ref = c0 / n * 1.5 * (6.0 / 5.0 + 5.0 * c1 / 6.0 * corr) + c1 / (6.0 * n) * 0.25 * corr;
  CHECK(theorem_mt_bound(40, BetaParams(2.0, 3.0), 1.5, 0.25) == doctest::Approx(ref).epsilon(1e-13));
  CHECK_THROWS_AS(theorem_mt_bound(0, BetaParams(1.0, 1.0), 1.0, 1.0), DomainError);
}

TEST_CASE("beta_plugin_bound reproduces the urn bound") {
  BetaParams p(1.0, 2.0);
  CHECK(beta_plugin_bound(0.5, 0.0, 0.0, 0.0, p, 1.0, 1.0) == 0.0);
  for (int n : {10, 100, 1000}) {
    const double a = p.a(), b = p.b();
    double lambda = 1.0 / (n * (a + b + n - 1.0));
    double es = a * b / ((a + b) * n);
    double cube = 1.0 / (static_cast<double>(n) * n * n);
    double plug = beta_plugin_bound(lambda, 0.0, es, cube, p, 0.8, 1.7);
    CHECK(plug == doctest::Approx(theorem_mt_bound(n, p, 0.8, 1.7)).epsilon(1e-12));
    double scaled = beta_plugin_bound(2.0 * lambda, 0.0, 0.0, 2.0 * cube, p, 0.8, 1.7);
    CHECK(scaled == doctest::Approx(beta_plugin_bound(lambda, 0.0, 0.0, cube, p, 0.8, 1.7)).epsilon(1e-14));
  }
  // The general plug-in bound with the Beta norm bounds gives the same value.
  const double a = 1.0, b = 2.0;
  const int n = 100;
  PairRegressionReport r{1.0 / (n * (a + b + n - 1.0)), 0.0, a * b / ((a + b) * n), 1e-6};
  PluginNorms norms{0.8 / (a + b), c_constant(p) * 0.8, second_derivative_bound(p, 0.8, 1.7)};
  CHECK(plugin_bound(r, norms) == doctest::Approx(beta_plugin_bound(r.lambda, 0.0, r.E_abs_S, r.E_abs_cube, p, 0.8, 1.7))
                                      .epsilon(1e-13));
}

TEST_CASE("characterization_check") {
  BetaSteinContext c31(BetaParams(3.0, 1.0));
  CHECK(std::fabs(characterization_check(c31, named_fixture("x3"), Measure{})) <= 1e-9);
  BetaSteinContext c23(BetaParams(2.0, 3.0));
  CHECK(std::fabs(characterization_check(c23, TestFunction::constant(1.0), Measure{})) <= 1e-12);
  // Uniform law against Beta(2,2), f = x: E[X(1-X)] - 4 E[(X - 1/2) X] = 1/6 - 1/3.
  BetaSteinContext c22(BetaParams(2.0, 2.0));
  DiscreteMeasure u;
  for (int i = 0; i < 4000; ++i) {
    u.points.push_back((i + 0.5) / 4000.0);
    u.weights.push_back(1.0);
  }
  CHECK(characterization_check(c22, named_fixture("x"), Measure{u}) == doctest::Approx(-1.0 / 6.0).epsilon(1e-7));
}

TEST_CASE("eta identity and the mean") {
  double worst = 0.0;
  for (double a : kParamGrid) {
    for (double b : kParamGrid) {
      BetaParams p(a, b);
      for (double x : oracle::grid(0.0, 1.0, 50)) {
        double rhs = oracle::beta_weighted([&](double t) { return a - (a + b) * t; }, a, b, 0.0, x);
        worst = std::max(worst, std::fabs(beta_pdf(x, p).value * x * (1.0 - x) - rhs));
      }
      auto s = beta_spec(p, false);
      CHECK(s->expectation([](double x) { return x; }) == doctest::Approx(a / (a + b)).epsilon(1e-12));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("sup of S") {
  for (double a : {0.3, 0.5, 0.9}) {
    auto s = beta_spec(BetaParams(a, a));
    SupEstimate est = estimate_sup([&](double z) { return kolmogorov_sup(*s, z); }, 0.0, 1.0);
    CHECK(est.value == doctest::Approx(1.0 / a).epsilon(1e-6));
  }
  for (double a : {1.0, 2.0, 7.0}) {
    auto s = beta_spec(BetaParams(a, a));
    SupEstimate est = estimate_sup([&](double z) { return kolmogorov_sup(*s, z); }, 0.0, 1.0);
    CHECK(est.value == doctest::Approx(1.0 / oracle::beta_pdf(0.5, a, a)).epsilon(1e-6));
  }
}

TEST_CASE("derivative bound ratio") {
  for (auto [a, b] : {std::pair{0.5, 2.0}, std::pair{2.0, 3.0}, std::pair{0.3, 0.3}}) {
    BetaSteinContext ctx(BetaParams(a, b));
    CHECK(derivative_bound_ratio(ctx, 1e-7) == doctest::Approx(2.0 / (a + 1.0)).epsilon(1e-4));
    CHECK(derivative_bound_ratio(ctx, 1.0 - 1e-7) == doctest::Approx(2.0 / (b + 1.0)).epsilon(1e-4));
    double cap = c_constant(BetaParams(a, b));
    for (double x : oracle::grid(0.0, 1.0, 49)) CHECK(derivative_bound_ratio(ctx, x) <= cap * (1.0 + 1e-9));
    RatioExploration r = explore_derivative_ratio(ctx, 257);
    CHECK(r.conjectured == doctest::Approx(2.0 / (std::min(a, b) + 1.0)));
    CHECK(r.sup_ratio >= derivative_bound_ratio(ctx, 1e-6) * (1.0 - 1e-12));
  }
}
