#include "steinpairs/report.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "steinpairs/errors.hpp"

namespace steinpairs {

using nlohmann::json;

namespace {

std::string format_float(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

void write_value(std::ostringstream& out, const json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [key, child] : v.items()) {
        if (!first) out << ",\n";
        first = false;
        out << pad << json(key).dump() << ": ";
        write_value(out, child, indent + 2);
      }
      out << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ",\n";
        out << pad;
        write_value(out, v[i], indent + 2);
      }
      out << "\n" << close << "]";
      return;
    }
    case json::value_t::number_float:
      out << format_float(v.get<double>());
      return;
    default:
      out << v.dump();
      return;
  }
}

std::string serialize_csv(const ReportArtifact& a) {
  if (a.kind != ReportKind::kRateStudy) {
    throw DomainError(std::string("serialize: CSV is only defined for rate_study, not ") + to_string(a.kind));
  }
  const json& p = a.payload;
  const json& n = p.at("n");
  const json& d = p.at("distance");
  const json& b = p.at("bound");
  std::ostringstream out;
  out << "n,distance,bound\n";
  for (std::size_t i = 0; i < n.size(); ++i) {
    out << n[i].get<long long>() << ',' << format_float(d[i].get<double>()) << ','
        << format_float(b[i].get<double>()) << '\n';
  }
  return out.str();
}

json rate_json(const RateStudyResult& r) {
  json j;
  j["a"] = r.params.a();
  j["b"] = r.params.b();
  j["fixture"] = r.fixture;
  j["mean_target"] = r.mean_target;
  j["n"] = r.n_values;
  j["distance"] = r.distances;
  j["bound"] = r.bounds;
  j["degenerate"] = r.degenerate;
  j["loglog_slope"] = r.loglog_slope;
  j["slope_stderr"] = r.slope_stderr;
  j["fit_points"] = r.fit_points;
  j["bounds_hold"] = r.bounds_hold;
  return j;
}

}  // namespace

const char* to_string(ReportKind k) {
  switch (k) {
    case ReportKind::kRateStudy:
      return "rate_study";
    case ReportKind::kBoundSuite:
      return "bound_suite";
    case ReportKind::kRegressionCheck:
      return "regression_check";
    case ReportKind::kMillsCheck:
      return "mills_check";
    case ReportKind::kExpCheck:
      return "exp_check";
    case ReportKind::kPolyaSimulation:
      return "polya_simulation";
    case ReportKind::kFrameworkDensity:
      return "framework_density";
  }
  return "unknown";
}

std::string serialize(const ReportArtifact& artifact) {
  if (artifact.format == ReportFormat::kCsv) return serialize_csv(artifact);
  json doc;
  doc["kind"] = to_string(artifact.kind);
  doc["payload"] = artifact.payload;
  std::ostringstream out;
  write_value(out, doc, 0);
  out << '\n';
  return out.str();
}

void emit_report(const ReportArtifact& artifact, const std::string& path) {
  const std::string text = serialize(artifact);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("emit_report: cannot open '" + path + "' for writing: " + std::strerror(errno));
  f << text;
  f.close();
  if (!f) throw IoError("emit_report: write to '" + path + "' failed");
}

json read_report(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("read_report: cannot open '" + path + "': " + std::strerror(errno));
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw IoError("read_report: '" + path + "' is not valid JSON: " + e.what());
  }
}

json to_json(const BoundReport& r) {
  json j;
  j["name"] = r.name;
  j["order"] = r.order;
  j["bound"] = r.bound;
  j["estimate"] = r.estimate;
  j["argmax"] = r.argmax;
  j["refinement_gap"] = r.refinement_gap;
  j["tolerance"] = r.tolerance;
  j["holds"] = r.holds;
  j["advisory"] = r.advisory;
  j["at_truncation"] = r.at_truncation;
  j["note"] = r.note;
  return j;
}

ReportArtifact make_artifact(const RateStudyResult& r, ReportFormat format) {
  return {ReportKind::kRateStudy, rate_json(r), format};
}

ReportArtifact make_artifact(const std::vector<RateStudyResult>& rs) {
  json studies = json::array();
  for (const auto& r : rs) studies.push_back(rate_json(r));
  json j;
  j["studies"] = studies;
  return {ReportKind::kRateStudy, j, ReportFormat::kJson};
}

ReportArtifact make_artifact(const std::vector<BoundReport>& bounds, const std::string& fixture, double a, double b) {
  json j;
  j["a"] = a;
  j["b"] = b;
  j["fixture"] = fixture;
  j["bounds"] = json::array();
  bool all = true;
  for (const auto& r : bounds) {
    j["bounds"].push_back(to_json(r));
    all = all && r.holds;
  }
  j["all_hold"] = all;
  return {ReportKind::kBoundSuite, j, ReportFormat::kJson};
}

ReportArtifact make_artifact(const std::vector<RegressionCheck>& checks) {
  json j;
  j["checks"] = json::array();
  bool all = true;
  for (const auto& c : checks) {
    json e;
    e["a"] = c.a;
    e["b"] = c.b;
    e["n"] = c.n;
    e["max_first_error"] = c.max_first_error;
    e["max_second_error"] = c.max_second_error;
    e["max_eta_error"] = c.max_eta_error;
    e["holds"] = c.holds;
    j["checks"].push_back(e);
    all = all && c.holds;
  }
  j["all_hold"] = all;
  return {ReportKind::kRegressionCheck, j, ReportFormat::kJson};
}

ReportArtifact make_artifact(const MillsReport& r) {
  json j;
  j["levels"] = r.levels;
  j["points"] = r.points;
  j["ratios"] = r.ratios;
  j["densities"] = r.densities;
  j["normalization"] = r.normalization;
  j["min_ratio"] = r.min_ratio;
  j["ratios_hold"] = r.ratios_hold;
  j["density_decreasing"] = r.density_decreasing;
  j["verdict"] = to_string(r.verdict);
  return {ReportKind::kMillsCheck, j, ReportFormat::kJson};
}

ReportArtifact make_artifact(const std::vector<ExponentialCheck>& checks, const std::string& fixture) {
  json j;
  j["fixture"] = fixture;
  j["checks"] = json::array();
  bool all = true;
  for (const auto& c : checks) {
    json e;
    e["alpha"] = c.alpha;
    e["lift_l1"] = c.lift_l1;
    e["holds"] = c.holds;
    e["bounds"] = json::array();
    for (const auto& r : c.bounds) e["bounds"].push_back(to_json(r));
    j["checks"].push_back(e);
    all = all && c.holds;
  }
  j["all_hold"] = all;
  return {ReportKind::kExpCheck, j, ReportFormat::kJson};
}

ReportArtifact make_artifact(const MonteCarloCheck& c) {
  json j;
  j["n"] = c.n;
  j["reps"] = c.reps;
  j["seed"] = c.seed;
  j["empirical_pmf"] = c.empirical;
  j["exact_pmf"] = c.exact;
  j["total_variation"] = c.tv;
  j["tv_cap"] = c.tv_cap;
  j["mean_w"] = c.mean_w;
  j["mean_w_prime"] = c.mean_w_prime;
  j["holds"] = c.holds;
  return {ReportKind::kPolyaSimulation, j, ReportFormat::kJson};
}

ReportArtifact make_artifact(const DensityRoundTrip& d) {
  json j;
  j["target"] = d.target;
  j["l1_error"] = d.l1;
  j["K"] = d.K;
  j["x0"] = d.x0;
  j["lower_trend"] = d.lower_trend;
  j["upper_trend"] = d.upper_trend;
  return {ReportKind::kFrameworkDensity, j, ReportFormat::kJson};
}

}  // namespace steinpairs
