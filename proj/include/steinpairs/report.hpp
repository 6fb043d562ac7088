#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "steinpairs/experiments.hpp"

namespace steinpairs {

enum class ReportKind { kRateStudy, kBoundSuite, kRegressionCheck, kMillsCheck, kExpCheck, kPolyaSimulation,
                        kFrameworkDensity };
enum class ReportFormat { kJson, kCsv };

const char* to_string(ReportKind k);

struct ReportArtifact {
  ReportKind kind = ReportKind::kRateStudy;
  nlohmann::json payload;  // objects keep keys sorted
  ReportFormat format = ReportFormat::kJson;
};

// Deterministic text: sorted keys, floats as %.12e, integers and booleans
// verbatim, NaN and infinities as the strings "nan", "inf", "-inf".
// CSV is only defined for rate_study (columns n,distance,bound).
std::string serialize(const ReportArtifact& artifact);
// Writes serialize(artifact); throws IoError naming the path.
void emit_report(const ReportArtifact& artifact, const std::string& path);
// Parses a JSON report file; throws IoError naming the path.
nlohmann::json read_report(const std::string& path);

ReportArtifact make_artifact(const RateStudyResult& r, ReportFormat format = ReportFormat::kCsv);
ReportArtifact make_artifact(const std::vector<RateStudyResult>& rs);
ReportArtifact make_artifact(const std::vector<BoundReport>& bounds, const std::string& fixture, double a, double b);
ReportArtifact make_artifact(const std::vector<RegressionCheck>& checks);
ReportArtifact make_artifact(const MillsReport& r);
ReportArtifact make_artifact(const std::vector<ExponentialCheck>& checks, const std::string& fixture);
ReportArtifact make_artifact(const MonteCarloCheck& c);
ReportArtifact make_artifact(const DensityRoundTrip& d);

nlohmann::json to_json(const BoundReport& r);

}  // namespace steinpairs
