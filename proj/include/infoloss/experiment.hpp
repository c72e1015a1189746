#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "infoloss/errors.hpp"
#include "infoloss/loss.hpp"
#include "infoloss/markov_source.hpp"
#include "infoloss/suites.hpp"
#include "infoloss/system.hpp"

namespace infoloss {

/// Configuration problem; the message carries "line:column" context.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

enum class AnalysisKind { kLossReport, kFiniteLength, kBound, kInvertibility, kRoundTrip, kFilterAnalysis, kPlugin };

struct AnalysisRequest {
  AnalysisKind kind = AnalysisKind::kLossReport;
  std::size_t K = 0;            // finite-length
  std::size_t length = 0;       // round-trip, plugin
  std::size_t count = 0;        // round-trip
  std::size_t block = 0;        // plugin
  std::uint64_t seed = 0;       // round-trip, plugin
  std::vector<double> b, a;     // filter-analysis
};

enum class ReportFormat { kJson, kText };

struct ExperimentConfig {
  std::string origin;
  MarkovSource source;
  SystemSpec system;
  std::string system_description;
  std::vector<AnalysisRequest> analyses;
  LossOptions loss;
  ReportFormat format = ReportFormat::kJson;
  /// Adds wall-clock times to the report, which makes it non-reproducible.
  bool timing = false;
};

/// Caps from INFOLOSS_STATE_CAP / INFOLOSS_PATH_CAP, else the library defaults.
AnalysisCaps default_caps();

ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::string& path);

struct ExperimentReport {
  nlohmann::ordered_json document;
  /// False iff some asserted identity or check failed.
  bool passed = true;
};

ExperimentReport run_experiment(const ExperimentConfig& config);
/// Only the round-trip analyses of `config` (a default one when none is listed).
ExperimentReport run_round_trip(const ExperimentConfig& config);

nlohmann::ordered_json filter_report(const std::vector<double>& b, const std::vector<double>& a);
nlohmann::ordered_json suite_report_json(const SuiteReport& report);

/// Aligned-column rendering of any report document.
std::string render_text(const nlohmann::ordered_json& document);
std::string render(const nlohmann::ordered_json& document, ReportFormat format);

}  // namespace infoloss
