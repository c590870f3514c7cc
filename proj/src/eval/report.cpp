#include "imgobf/eval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "imgobf/core/error.hpp"
#include "imgobf/core/obfuscation_id.hpp"
#include "imgobf/io/files.hpp"

namespace imgobf {

using nlohmann::json;

namespace {

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::vector<std::string> default_holdouts() {
  std::vector<std::string> out;
  for (const auto& i : all_obfuscations()) {
    if (i.split == Split::HoldOut) out.emplace_back(i.name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

json confusion_to_json(const ConfusionMatrix& m) {
  return {{"percent", m.percent}, {"row_counts", m.row_counts}, {"empty_rows", m.empty_rows}};
}

ConfusionMatrix confusion_from_json(const json& j) {
  ConfusionMatrix m;
  m.percent = j.at("percent").get<decltype(m.percent)>();
  m.row_counts = j.at("row_counts").get<decltype(m.row_counts)>();
  m.empty_rows = j.at("empty_rows").get<std::vector<int>>();
  return m;
}

std::string render_csv(const EvalReport& r) {
  std::string out = "model,obfuscation,metric,value\n";
  auto row = [&](const std::string& model, const std::string& obf, const std::string& metric, double v) {
    out += csv_field(model) + "," + csv_field(obf) + "," + metric + "," + fixed4(v) + "\n";
  };
  for (const auto& m : r.models) {
    for (const auto& [obf, v] : m.weighted) {
      row(m.model, obf, "weighted", v);
      if (const auto it = m.unweighted.find(obf); it != m.unweighted.end()) row(m.model, obf, "unweighted", it->second);
      for (const auto& [k, table] : m.topk) {
        if (const auto it = table.find(obf); it != table.end()) row(m.model, obf, "top" + std::to_string(k), it->second);
      }
    }
  }
  return out;
}

std::string render_svg(const EvalReport& r) {
  std::vector<std::string> columns;
  for (const auto& m : r.models) {
    for (const auto& [obf, v] : m.weighted) {
      if (std::find(columns.begin(), columns.end(), obf) == columns.end()) columns.push_back(obf);
    }
  }
  std::sort(columns.begin(), columns.end());
  constexpr int kCell = 56;
  constexpr int kLeft = 180;
  constexpr int kTop = 170;
  const int width = kLeft + kCell * static_cast<int>(columns.size()) + 10;
  const int height = kTop + kCell * static_cast<int>(r.models.size()) + 10;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
                  std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const int x = kLeft + kCell * static_cast<int>(c) + kCell / 2;
    s += "  <text class=\"col-label\" transform=\"translate(" + std::to_string(x) + "," + std::to_string(kTop - 6) +
         ") rotate(-60)\">" + xml_escape(columns[c]) + "</text>\n";
  }
  for (std::size_t m = 0; m < r.models.size(); ++m) {
    const auto& model = r.models[m];
    const int y = kTop + kCell * static_cast<int>(m);
    s += "  <text class=\"row-label\" x=\"" + std::to_string(kLeft - 6) + "\" y=\"" + std::to_string(y + kCell / 2 + 4) +
         "\" text-anchor=\"end\">" + xml_escape(model.model) + "</text>\n";
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto it = model.weighted.find(columns[c]);
      if (it == model.weighted.end()) continue;
      const double v = it->second;
      const int x = kLeft + kCell * static_cast<int>(c);
      const int shade = static_cast<int>(255.0 * (1.0 - v));
      char fill[16];
      std::snprintf(fill, sizeof(fill), "#%02x%02xff", shade, shade);
      s += "  <g class=\"cell\" data-model=\"" + xml_escape(model.model) + "\" data-obfuscation=\"" +
           xml_escape(columns[c]) + "\">";
      s += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" + std::to_string(kCell) +
           "\" height=\"" + std::to_string(kCell) + "\" fill=\"" + fill + "\" stroke=\"#ffffff\"/>";
      s += "<text x=\"" + std::to_string(x + kCell / 2) + "\" y=\"" + std::to_string(y + kCell / 2 + 4) +
           "\" text-anchor=\"middle\" fill=\"" + (v > 0.5 ? "#ffffff" : "#000000") + "\">" + fixed4(v * 100.0).substr(0, 5) +
           "</text></g>\n";
    }
  }
  return s + "</svg>\n";
}

}  // namespace

std::optional<double> EvalReport::headline() const {
  if (oracle) return oracle->accuracy;
  std::optional<double> best;
  for (const auto& m : models) {
    if (m.worst_case && (!best || *m.worst_case > *best)) best = m.worst_case;
  }
  return best;
}

EvalReport build_report(const ModelPredictions& models, const Labels& labels, const SuperClassTable& table,
                        const ReportOptions& options) {
  EvalReport r;
  r.k_values = options.k_values;
  std::sort(r.k_values.begin(), r.k_values.end());
  r.k_values.erase(std::unique(r.k_values.begin(), r.k_values.end()), r.k_values.end());
  r.worst_case_obfuscations =
      options.worst_case_obfuscations.empty() ? default_holdouts() : options.worst_case_obfuscations;
  r.manifest_checksum = options.manifest_checksum;
  r.table_version = table.version();
  r.tool_version = IMGOBF_VERSION;

  ModelPredictions worst_sets;
  for (const auto& [name, sets] : models) {
    ModelReport m;
    m.model = name;
    std::set<std::string> seen;
    for (const auto& s : sets) {
      require(seen.insert(s.obfuscation).second, "model " + name + " has two sets for " + s.obfuscation);
      m.superclass_inputs = m.superclass_inputs || s.kind == PredictionKind::SuperClass;
      const Outcomes o = score(s, labels, table);
      m.excluded_images = std::max(m.excluded_images, o.excluded);
      m.weighted[s.obfuscation] = aggregate(o.truth, o.correct, true);
      if (options.unweighted) m.unweighted[s.obfuscation] = aggregate(o.truth, o.correct, false);
      for (const int k : r.k_values) m.topk[k][s.obfuscation] = topk_accuracy(s, labels, table, k, true);
      if (options.confusion) m.confusion[s.obfuscation] = confusion_matrix(s, labels, table);
    }
    std::vector<PredictionSet> chosen;
    std::vector<std::string> missing;
    for (const auto& w : r.worst_case_obfuscations) {
      const auto it = std::find_if(sets.begin(), sets.end(), [&](const auto& s) { return s.obfuscation == w; });
      if (it == sets.end()) {
        missing.push_back(w);
      } else {
        chosen.push_back(*it);
      }
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& x : missing) list += (list.empty() ? "" : ", ") + x;
      fail(ErrorCode::Coverage, "model " + name + " has no predictions for " + list);
    }
    m.worst_case = worst_case_accuracy(chosen, labels, table, true);
    worst_sets[name] = std::move(chosen);
    r.models.push_back(std::move(m));
  }
  if (options.oracle) {
    const OracleResult o = oracle_combination(worst_sets, labels, table, *options.oracle);
    r.oracle = OracleSummary{*options.oracle == OracleMode::PerImage ? "per-image" : "per-obfuscation", o.accuracy,
                             o.assignment};
  }
  return r;
}

json report_to_json(const EvalReport& r) {
  json models = json::array();
  for (const auto& m : r.models) {
    json topk = json::object();
    for (const auto& [k, t] : m.topk) topk[std::to_string(k)] = t;
    json conf = json::object();
    for (const auto& [obf, c] : m.confusion) conf[obf] = confusion_to_json(c);
    models.push_back({{"model", m.model},
                      {"superclass_inputs", m.superclass_inputs},
                      {"excluded_images", m.excluded_images},
                      {"weighted", m.weighted},
                      {"unweighted", m.unweighted},
                      {"topk", topk},
                      {"worst_case", m.worst_case ? json(*m.worst_case) : json(nullptr)},
                      {"confusion", conf}});
  }
  json doc = {{"models", models},
              {"worst_case_obfuscations", r.worst_case_obfuscations},
              {"k_values", r.k_values},
              {"metadata",
               {{"manifest_checksum", r.manifest_checksum},
                {"superclass_table_version", r.table_version},
                {"tool_version", r.tool_version}}}};
  doc["oracle"] = r.oracle ? json{{"mode", r.oracle->mode},
                                  {"accuracy", r.oracle->accuracy},
                                  {"assignment", r.oracle->assignment}}
                           : json(nullptr);
  return doc;
}

EvalReport report_from_json(const json& doc) {
  EvalReport r;
  try {
    for (const auto& j : doc.at("models")) {
      ModelReport m;
      m.model = j.at("model").get<std::string>();
      m.superclass_inputs = j.at("superclass_inputs").get<bool>();
      m.excluded_images = j.at("excluded_images").get<std::int64_t>();
      m.weighted = j.at("weighted").get<std::map<std::string, double>>();
      m.unweighted = j.at("unweighted").get<std::map<std::string, double>>();
      for (const auto& [k, t] : j.at("topk").items()) m.topk[std::stoi(k)] = t.get<std::map<std::string, double>>();
      if (!j.at("worst_case").is_null()) m.worst_case = j["worst_case"].get<double>();
      for (const auto& [obf, c] : j.at("confusion").items()) m.confusion[obf] = confusion_from_json(c);
      r.models.push_back(std::move(m));
    }
    r.worst_case_obfuscations = doc.at("worst_case_obfuscations").get<std::vector<std::string>>();
    r.k_values = doc.at("k_values").get<std::vector<int>>();
    const auto& meta = doc.at("metadata");
    r.manifest_checksum = meta.at("manifest_checksum").get<std::string>();
    r.table_version = meta.at("superclass_table_version").get<std::string>();
    r.tool_version = meta.at("tool_version").get<std::string>();
    if (!doc.at("oracle").is_null()) {
      const auto& o = doc["oracle"];
      r.oracle = OracleSummary{o.at("mode").get<std::string>(), o.at("accuracy").get<double>(),
                               o.at("assignment").get<std::map<std::string, std::string>>()};
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::Format, std::string("report: ") + e.what());
  }
  return r;
}

std::string render_report(const EvalReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return report_to_json(report).dump(2) + "\n";
    case ReportFormat::Csv: return render_csv(report);
    case ReportFormat::Svg: return render_svg(report);
  }
  fail(ErrorCode::InvalidArgument, "unknown report format");
}

void emit_report(const EvalReport& report, ReportFormat format, const std::filesystem::path& path) {
  io::write_atomic(path, render_report(report, format));
}

EvalReport load_report_json(const std::filesystem::path& path) {
  return report_from_json(json::parse(io::read_text(path)));
}

}  // namespace imgobf
