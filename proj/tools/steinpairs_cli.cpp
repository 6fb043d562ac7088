#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "steinpairs/beta_stein.hpp"
#include "steinpairs/distributions.hpp"
#include "steinpairs/errors.hpp"
#include "steinpairs/experiments.hpp"
#include "steinpairs/polya.hpp"
#include "steinpairs/report.hpp"

using namespace steinpairs;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  double a = 1.0;
  double b = 1.0;
  double alpha = 1.0;
  std::vector<int> n{100};
  std::vector<double> a_list;
  std::vector<double> b_list;
  std::string h = "x2";
  std::vector<double> poly;
  std::string target = "beta";
  std::uint64_t seed = 1;
  long long reps = 1000000;
  int threads = 0;
  int order = 1;
  int grid = 101;
  int levels = 10;
  double tol = 1e-13;
  std::string output;
  std::string format = "json";
};

TestFunction parse_h(const Options& o) {
  if (!o.poly.empty()) return TestFunction::polynomial(o.poly);
  for (const auto& name : fixture_names()) {
    if (name == o.h) return named_fixture(o.h);
  }
  throw UsageError("unknown test function '" + o.h + "'");
}

SpecPtr parse_target(const Options& o) {
  if (o.target == "beta") return beta_spec(BetaParams(o.a, o.b));
  if (o.target == "normal") return normal_spec();
  if (o.target == "exponential") return exponential_spec(o.alpha);
  throw UsageError("unknown target '" + o.target + "' (beta, normal, exponential)");
}

void write(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
}

void write_report(const ReportArtifact& a, const std::string& path) {
  if (path.empty()) {
    std::cout << serialize(a);
  } else {
    emit_report(a, path);
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

int cmd_solve(const Options& o) {
  SpecPtr spec = parse_target(o);
  TestFunction h = parse_h(o);
  SteinSolution g = o.target == "beta" ? solve(BetaSteinContext(BetaParams(o.a, o.b)), h) : standard_solution(spec, h);
  const double lo = spec->grid_lower();
  const double hi = spec->grid_upper();
  std::ostringstream out;
  out << "x,g,dg\n";
  for (int i = 0; i < o.grid; ++i) {
    double x = lo + (hi - lo) * (i + 1.0) / (o.grid + 1.0);
    out << fmt(x) << ',' << fmt(g(x)) << ',' << fmt(g.derivative(x)) << '\n';
  }
  write(out.str(), o.output);
  return kOk;
}

int cmd_constants(const Options& o) {
  std::vector<double> as = o.a_list.empty() ? std::vector<double>{o.a} : o.a_list;
  std::vector<double> bs = o.b_list.empty() ? std::vector<double>{o.b} : o.b_list;
  std::ostringstream out;
  char buf[64];
  if (as.size() == 1 && bs.size() == 1) {
    std::snprintf(buf, sizeof buf, "%.12g\n", c_constant(BetaParams(as[0], bs[0])));
    out << buf;
  } else {
    out << "a,b,C\n";
    for (double a : as) {
      for (double b : bs) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12e\n", a, b, c_constant(BetaParams(a, b)));
        out << buf;
      }
    }
  }
  write(out.str(), o.output);
  return kOk;
}

int cmd_bounds(const Options& o) {
  BetaSteinContext ctx(BetaParams(o.a, o.b));
  TestFunction h = parse_h(o);
  auto reports = bound_suite(ctx, h, o.order);
  ReportArtifact art = make_artifact(reports, h.name(), o.a, o.b);
  write_report(art, o.output);
  return art.payload["all_hold"].get<bool>() ? kOk : kFailed;
}

int cmd_polya_check(const Options& o) {
  std::vector<RegressionCheck> checks;
  for (int n : o.n) checks.push_back(regression_check(PolyaModel(o.a, o.b, n), o.tol));
  ReportArtifact art = make_artifact(checks);
  write_report(art, o.output);
  return art.payload["all_hold"].get<bool>() ? kOk : kFailed;
}

int cmd_polya_simulate(const Options& o) {
  if (o.n.size() != 1) throw UsageError("polya simulate takes a single --n");
  MonteCarloCheck c = monte_carlo_check(PolyaModel(o.a, o.b, o.n[0]), o.reps, o.seed, o.threads);
  write_report(make_artifact(c), o.output);
  return c.holds ? kOk : kFailed;
}

int cmd_rate_study(const Options& o) {
  if (o.format != "csv" && o.format != "json") throw UsageError("--format must be csv or json");
  RateStudyResult r = rate_study(BetaParams(o.a, o.b), parse_h(o), o.n);
  write_report(make_artifact(r, o.format == "csv" ? ReportFormat::kCsv : ReportFormat::kJson), o.output);
  std::cerr << "loglog_slope=" << fmt(r.loglog_slope) << " stderr=" << fmt(r.slope_stderr)
            << " fit_points=" << r.fit_points << '\n';
  return r.bounds_hold ? kOk : kFailed;
}

int cmd_framework_density(const Options& o) {
  DensityRoundTrip d = density_round_trip(parse_target(o));
  write_report(make_artifact(d), o.output);
  return d.l1 <= 1e-8 ? kOk : kFailed;
}

int cmd_mills(const Options& o) {
  MillsReport r = mills_counterexample(o.levels);
  write_report(make_artifact(r), o.output);
  return r.ratios_hold && r.density_decreasing ? kOk : kFailed;
}

int cmd_exp(const Options& o) {
  TestFunction h = parse_h(o);
  std::vector<ExponentialCheck> checks{exponential_check(o.alpha, h)};
  ReportArtifact art = make_artifact(checks, h.name());
  write_report(art, o.output);
  return checks[0].holds && checks[0].lift_l1 <= 1e-8 ? kOk : kFailed;
}

// Flag helpers shared by subcommands.
void add_ab(CLI::App* c, Options& o) {
  c->add_option("--a", o.a, "Beta/urn parameter a > 0")->check(CLI::PositiveNumber);
  c->add_option("--b", o.b, "Beta/urn parameter b > 0")->check(CLI::PositiveNumber);
}

void add_h(CLI::App* c, Options& o) {
  c->add_option("--h", o.h, "Named test function: x, x2, x3, smoothstep, logistic, sin3, sin, absdev");
  c->add_option("--poly", o.poly, "Polynomial test function, ascending coefficients (comma separated)")
      ->delimiter(',');
}

void add_output(CLI::App* c, Options& o) { c->add_option("--output,-o", o.output, "Write the report to this file"); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stein's method for Beta targets and Polya urns"};
  // --h names the test function, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Options o;

  auto* solve_cmd = app.add_subcommand("solve", "Print the Stein solution g_h and g_h' on a grid");
  add_ab(solve_cmd, o);
  add_h(solve_cmd, o);
  add_output(solve_cmd, o);
  solve_cmd->add_option("--target", o.target, "beta, normal or exponential");
  solve_cmd->add_option("--alpha", o.alpha, "Exponential rate")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--grid", o.grid, "Number of interior grid points")->check(CLI::Range(1, 1000000));

  auto* const_cmd = app.add_subcommand("constants", "Print C(a,b), or a table for lists of a and b");
  add_ab(const_cmd, o);
  const_cmd->add_option("--a-list", o.a_list, "Comma separated a values")->delimiter(',')->check(CLI::PositiveNumber);
  const_cmd->add_option("--b-list", o.b_list, "Comma separated b values")->delimiter(',')->check(CLI::PositiveNumber);
  add_output(const_cmd, o);

  auto* bounds_cmd = app.add_subcommand("bounds", "Bound suite for ||g_h^(k)||, k = 0..order");
  add_ab(bounds_cmd, o);
  add_h(bounds_cmd, o);
  add_output(bounds_cmd, o);
  bounds_cmd->add_option("--order", o.order, "Highest derivative order m")->check(CLI::Range(0, 60));

  auto* polya_cmd = app.add_subcommand("polya", "Polya urn checks");
  polya_cmd->require_subcommand(1);
  auto* check_cmd = polya_cmd->add_subcommand("check", "Regression identities for every k; exit 1 on violation");
  add_ab(check_cmd, o);
  add_output(check_cmd, o);
  check_cmd->add_option("--n", o.n, "Number of draws (comma separated list allowed)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  check_cmd->add_option("--tol", o.tol, "Absolute tolerance")->check(CLI::PositiveNumber);
  auto* sim_cmd = polya_cmd->add_subcommand("simulate", "Simulate exchangeable pairs and compare with the exact pmf");
  add_ab(sim_cmd, o);
  add_output(sim_cmd, o);
  sim_cmd->add_option("--n", o.n, "Number of draws")->delimiter(',')->check(CLI::PositiveNumber);
  sim_cmd->add_option("--reps", o.reps, "Monte Carlo repetitions")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", o.seed, "64-bit seed");
  sim_cmd->add_option("--threads", o.threads, "Worker threads (default: STEINPAIRS_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  auto* rate_cmd = app.add_subcommand("rate-study", "Exact distances and theorem bounds over n");
  add_ab(rate_cmd, o);
  add_h(rate_cmd, o);
  add_output(rate_cmd, o);
  rate_cmd->add_option("--n", o.n, "Comma separated n values")->delimiter(',')->check(CLI::PositiveNumber);
  rate_cmd->add_option("--format", o.format, "csv or json")->default_str("csv");

  auto* fw_cmd = app.add_subcommand("framework", "General framework tools");
  fw_cmd->require_subcommand(1);
  auto* dens_cmd = fw_cmd->add_subcommand("density", "Reconstruct p from (gamma, eta) of a named target");
  add_ab(dens_cmd, o);
  add_output(dens_cmd, o);
  dens_cmd->add_option("--target", o.target, "beta, normal or exponential");
  dens_cmd->add_option("--alpha", o.alpha, "Exponential rate")->check(CLI::PositiveNumber);

  auto* mills_cmd = app.add_subcommand("mills-check", "Mills ratio counterexample along x_2n");
  mills_cmd->add_option("--levels", o.levels, "Number of levels (1..40)")->check(CLI::Range(1, 40));
  add_output(mills_cmd, o);

  auto* exp_cmd = app.add_subcommand("exp-check", "Derivative bounds for the Exponential(alpha) target");
  exp_cmd->add_option("--alpha", o.alpha, "Exponential rate")->check(CLI::PositiveNumber);
  add_h(exp_cmd, o);
  add_output(exp_cmd, o);

  // rate-study writes CSV unless --format says otherwise.
  rate_cmd->preparse_callback([&](std::size_t) { o.format = "csv"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(o);
    if (*const_cmd) return cmd_constants(o);
    if (*bounds_cmd) return cmd_bounds(o);
    if (*check_cmd) return cmd_polya_check(o);
    if (*sim_cmd) return cmd_polya_simulate(o);
    if (*rate_cmd) return cmd_rate_study(o);
    if (*dens_cmd) return cmd_framework_density(o);
    if (*mills_cmd) return cmd_mills(o);
    if (*exp_cmd) return cmd_exp(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n' << "Run with --help for usage.\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const SmoothnessError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}
