#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <variant>
#include <vector>

#include "steinpairs/beta_stein.hpp"
#include "steinpairs/distributions.hpp"
#include "steinpairs/errors.hpp"
#include "steinpairs/experiments.hpp"
#include "steinpairs/polya.hpp"
#include "steinpairs/report.hpp"

namespace py = pybind11;
using namespace steinpairs;

namespace {

using HArg = std::variant<std::string, std::vector<double>>;

TestFunction to_h(const HArg& h) {
  if (const auto* coeffs = std::get_if<std::vector<double>>(&h)) return TestFunction::polynomial(*coeffs);
  const std::string& name = std::get<std::string>(h);
  for (const auto& n : fixture_names()) {
    if (n == name) return named_fixture(name);
  }
  throw DomainError("unknown test function '" + name + "'");
}

SpecPtr to_target(const std::string& target, double a, double b, double alpha) {
  if (target == "beta") return beta_spec(BetaParams(a, b));
  if (target == "normal") return normal_spec();
  if (target == "exponential") return exponential_spec(alpha);
  throw DomainError("unknown target '" + target + "'");
}

py::dict bound_dict(const BoundReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["order"] = r.order;
  d["bound"] = r.bound;
  d["estimate"] = r.estimate;
  d["argmax"] = r.argmax;
  d["holds"] = r.holds;
  d["advisory"] = r.advisory;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stein's method for Beta targets, the general first-order framework and Polya urns";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SmoothnessError>(m, "SmoothnessError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);

  m.def("fixture_names", &fixture_names);

  m.def(
      "c_constant", [](double a, double b) { return c_constant(BetaParams(a, b)); }, py::arg("a"), py::arg("b"));
  m.def(
      "theorem_mt_bound",
      [](int n, double a, double b, double norm_h1, double norm_h2) {
        return theorem_mt_bound(n, BetaParams(a, b), norm_h1, norm_h2);
      },
      py::arg("n"), py::arg("a"), py::arg("b"), py::arg("norm_h1"), py::arg("norm_h2"));

  m.def(
      "solve",
      [](double a, double b, const HArg& h, const std::vector<double>& xs) {
        SteinSolution g = solve(BetaSteinContext(BetaParams(a, b)), to_h(h));
        py::dict d;
        std::vector<double> gv, dv;
        for (double x : xs) {
          gv.push_back(g(x));
          dv.push_back(g.derivative(x));
        }
        d["mean_h"] = g.mean_h();
        d["g"] = gv;
        d["dg"] = dv;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("h"), py::arg("x"),
      "Standard Stein solution g_h and g_h' at the points x for the Beta(a, b) target.");

  m.def(
      "bound_suite",
      [](double a, double b, const HArg& h, int order) {
        py::list out;
        for (const auto& r : bound_suite(BetaSteinContext(BetaParams(a, b)), to_h(h), order)) out.append(bound_dict(r));
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("h"), py::arg("order") = 1);

  m.def(
      "compute_eta",
      [](const std::string& target, double x, double a, double b, double alpha) {
        SpecPtr spec = target == "beta" ? beta_spec(BetaParams(a, b), false)
                       : target == "normal" ? normal_spec(false)
                                            : exponential_spec(alpha, false);
        return compute_eta(*spec, x);
      },
      py::arg("target"), py::arg("x"), py::arg("a") = 1.0, py::arg("b") = 1.0, py::arg("alpha") = 1.0,
      "eta(x) = I(x)/p(x) computed by quadrature from gamma and p.");

  m.def(
      "density_round_trip",
      [](const std::string& target, double a, double b, double alpha) {
        DensityRoundTrip r = density_round_trip(to_target(target, a, b, alpha));
        py::dict d;
        d["l1"] = r.l1;
        d["K"] = r.K;
        d["x0"] = r.x0;
        d["lower_trend"] = r.lower_trend;
        d["upper_trend"] = r.upper_trend;
        return d;
      },
      py::arg("target"), py::arg("a") = 1.0, py::arg("b") = 1.0, py::arg("alpha") = 1.0);

  m.def(
      "pmf", [](double a, double b, int n) { return pmf(PolyaModel(a, b, n)).probabilities(); }, py::arg("a"),
      py::arg("b"), py::arg("n"));

  m.def(
      "regression",
      [](double a, double b, int n, int k) {
        PolyaModel model(a, b, n);
        RegressionFirst f = regression_first(model, k);
        RegressionSecond s = regression_second(model, k);
        py::dict d;
        d["first_conditional"] = f.conditional;
        d["first_closed_form"] = f.closed_form;
        d["second_conditional"] = s.conditional;
        d["second_closed_form"] = s.closed_form;
        d["second_eta_form"] = s.eta_form;
        d["S"] = s.S_remainder;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("n"), py::arg("k"));

  m.def(
      "regression_check",
      [](double a, double b, int n, double tol) {
        RegressionCheck c = regression_check(PolyaModel(a, b, n), tol);
        py::dict d;
        d["max_first_error"] = c.max_first_error;
        d["max_second_error"] = c.max_second_error;
        d["max_eta_error"] = c.max_eta_error;
        d["holds"] = c.holds;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("n"), py::arg("tol") = 1e-13);

  m.def(
      "simulate_pair",
      [](double a, double b, int n, long long reps, std::uint64_t seed, int threads) {
        std::vector<PairSample> s;
        {
          py::gil_scoped_release release;
          s = simulate_pair(PolyaModel(a, b, n), reps, seed, threads);
        }
        std::vector<double> w, wp;
        w.reserve(s.size());
        wp.reserve(s.size());
        for (const auto& p : s) {
          w.push_back(p.w);
          wp.push_back(p.w_prime);
        }
        return py::make_tuple(w, wp);
      },
      py::arg("a"), py::arg("b"), py::arg("n"), py::arg("reps"), py::arg("seed"), py::arg("threads") = 0,
      "Returns (W, W') lists from the exchangeable-pair construction.");

  m.def(
      "monte_carlo_check",
      [](double a, double b, int n, long long reps, std::uint64_t seed, int threads) {
        MonteCarloCheck c;
        {
          py::gil_scoped_release release;
          c = monte_carlo_check(PolyaModel(a, b, n), reps, seed, threads);
        }
        return serialize(make_artifact(c));
      },
      py::arg("a"), py::arg("b"), py::arg("n"), py::arg("reps"), py::arg("seed"), py::arg("threads") = 0,
      "JSON report of the empirical pmf against the exact pmf.");

  m.def(
      "rate_study",
      [](double a, double b, const HArg& h, const std::vector<int>& ns) {
        RateStudyResult r = rate_study(BetaParams(a, b), to_h(h), ns);
        py::dict d;
        d["n"] = r.n_values;
        d["distance"] = r.distances;
        d["bound"] = r.bounds;
        d["degenerate"] = r.degenerate;
        d["slope"] = r.loglog_slope;
        d["slope_stderr"] = r.slope_stderr;
        d["bounds_hold"] = r.bounds_hold;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("h"), py::arg("n"));

  m.def(
      "intro_comparison",
      [](int n) {
        IntroComparison c = intro_comparison(n);
        return py::make_tuple(c.ours, c.theirs);
      },
      py::arg("n"));

  m.def(
      "exponential_check",
      [](double alpha, const HArg& h) {
        ExponentialCheck c = exponential_check(alpha, to_h(h));
        py::dict d;
        py::list bounds;
        for (const auto& r : c.bounds) bounds.append(bound_dict(r));
        d["bounds"] = bounds;
        d["lift_l1"] = c.lift_l1;
        d["holds"] = c.holds;
        return d;
      },
      py::arg("alpha"), py::arg("h"));

  m.def(
      "mills_counterexample",
      [](int levels) {
        MillsReport r = mills_counterexample(levels);
        py::dict d;
        d["points"] = r.points;
        d["ratios"] = r.ratios;
        d["densities"] = r.densities;
        d["normalization"] = r.normalization;
        d["ratios_hold"] = r.ratios_hold;
        d["density_decreasing"] = r.density_decreasing;
        d["verdict"] = std::string(to_string(r.verdict));
        return d;
      },
      py::arg("levels") = 10);
}
