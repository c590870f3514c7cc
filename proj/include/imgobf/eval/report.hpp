#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "imgobf/eval/metrics.hpp"
#include "imgobf/eval/predictions.hpp"

namespace imgobf {

struct ModelReport {
  std::string model;
  bool superclass_inputs = false;  // predictions were already aggregated
  std::int64_t excluded_images = 0;
  std::map<std::string, double> weighted;    // obfuscation -> accuracy
  std::map<std::string, double> unweighted;
  std::map<int, std::map<std::string, double>> topk;  // k -> obfuscation -> weighted top-k
  std::optional<double> worst_case;
  std::map<std::string, ConfusionMatrix> confusion;

  friend bool operator==(const ModelReport&, const ModelReport&) = default;
};

struct OracleSummary {
  std::string mode;  // "per-image" or "per-obfuscation"
  double accuracy = 0.0;
  std::map<std::string, std::string> assignment;

  friend bool operator==(const OracleSummary&, const OracleSummary&) = default;
};

struct EvalReport {
  std::vector<ModelReport> models;
  std::optional<OracleSummary> oracle;
  std::vector<std::string> worst_case_obfuscations;
  std::vector<int> k_values;
  std::string manifest_checksum;
  std::string table_version;
  std::string tool_version;

  /// Oracle accuracy when present, otherwise the best model worst case.
  std::optional<double> headline() const;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct ReportOptions {
  std::vector<int> k_values;
  bool unweighted = true;
  bool confusion = false;
  /// Sets whose conjunction gives the worst case; defaults to the hold-outs.
  std::vector<std::string> worst_case_obfuscations;
  std::optional<OracleMode> oracle;
  std::string manifest_checksum;
};

/// Throws ErrorCode::Coverage when a model lacks a worst-case set or the
/// sets cover different images.
EvalReport build_report(const ModelPredictions& models, const Labels& labels, const SuperClassTable& table,
                        const ReportOptions& options);

enum class ReportFormat { Json, Csv, Svg };

std::string render_report(const EvalReport& report, ReportFormat format);
void emit_report(const EvalReport& report, ReportFormat format, const std::filesystem::path& path);

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& doc);
EvalReport load_report_json(const std::filesystem::path& path);

}  // namespace imgobf
