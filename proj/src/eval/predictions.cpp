#include "imgobf/eval/predictions.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <json.hpp>

#include "imgobf/core/error.hpp"
#include "imgobf/io/files.hpp"
#include "imgobf/pipeline/corpus.hpp"

namespace imgobf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (auto& f : out) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
  }
  return out;
}

PredictionKind kind_from_header(const std::vector<std::string_view>& header, const fs::path& path) {
  auto matches = [&](char prefix, int n) {
    if (header.size() != static_cast<std::size_t>(n) + 1 || header[0] != "image_id") return false;
    for (int i = 0; i < n; ++i) {
      if (header[static_cast<std::size_t>(i) + 1] != prefix + std::to_string(i)) return false;
    }
    return true;
  };
  if (matches('p', kNumImageNetClasses)) return PredictionKind::ImageNet;
  if (matches('s', kNumSuperClasses)) return PredictionKind::SuperClass;
  fail(ErrorCode::Format, path.string() + ": header must be image_id,p0..p999 or image_id,s0..s15");
}

}  // namespace

PredictionSet load_prediction_csv(const fs::path& path, const std::string& obfuscation) {
  const std::string text = io::read_text(path);
  std::istringstream in(text);
  std::string line;
  PredictionSet set;
  set.obfuscation = obfuscation;
  if (!std::getline(in, line)) fail(ErrorCode::Format, path.string() + ": empty prediction file");
  set.kind = kind_from_header(split(line), path);
  const std::size_t n = set.kind == PredictionKind::ImageNet ? kNumImageNetClasses : kNumSuperClasses;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split(line);
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (fields.size() != n + 1) fail(ErrorCode::Format, where + ": expected " + std::to_string(n + 1) + " fields");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto f = fields[i + 1];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v[i]);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        fail(ErrorCode::Format, where + ": field " + std::to_string(i + 1) + " is not a number");
      }
    }
    const std::string id(fields[0]);
    if (id.empty() || !set.entries.emplace(id, std::move(v)).second) {
      fail(ErrorCode::Format, where + ": empty or duplicate image id \"" + id + "\"");
    }
  }
  set.validate();
  return set;
}

ModelPredictions load_prediction_bundle(const fs::path& path) {
  ModelPredictions out;
  try {
    const json doc = json::parse(io::read_text(path));
    for (const auto& [model, sets] : doc.at("models").items()) {
      for (const auto& [obf, body] : sets.items()) {
        PredictionSet s;
        s.obfuscation = obf;
        const std::string kind = body.value("kind", "imagenet");
        if (kind == "imagenet") {
          s.kind = PredictionKind::ImageNet;
        } else if (kind == "superclass") {
          s.kind = PredictionKind::SuperClass;
        } else {
          fail(ErrorCode::Format, path.string() + ": unknown prediction kind \"" + kind + "\"");
        }
        for (const auto& [id, v] : body.at("predictions").items()) s.entries[id] = v.get<std::vector<double>>();
        s.validate();
        out[model].push_back(std::move(s));
      }
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::Format, path.string() + ": " + e.what());
  }
  if (out.empty()) fail(ErrorCode::Format, path.string() + ": bundle contains no models");
  return out;
}

ModelPredictions load_prediction_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) fail(ErrorCode::Io, "prediction directory not found: " + dir.string());
  auto csvs_in = [](const fs::path& d) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(d)) {
      if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    return files;
  };
  ModelPredictions out;
  auto load_model = [&](const std::string& model, const fs::path& d) {
    for (const auto& f : csvs_in(d)) out[model].push_back(load_prediction_csv(f, f.stem().string()));
  };
  if (!csvs_in(dir).empty()) {
    fs::path norm = fs::absolute(dir).lexically_normal();
    if (norm.filename().empty()) norm = norm.parent_path();
    load_model(norm.filename().string(), dir);
    return out;
  }
  std::vector<fs::path> subdirs;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) subdirs.push_back(e.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  for (const auto& d : subdirs) load_model(d.filename().string(), d);
  if (out.empty()) fail(ErrorCode::Format, dir.string() + ": no prediction CSV files found");
  return out;
}

Labels load_labels(const fs::path& path) {
  if (path.extension() == ".json") {
    const CorpusManifest m = CorpusManifest::from_json(json::parse(io::read_text(path)));
    Labels labels;
    for (const auto& r : m.records) labels[r.image_id] = r.class_id;
    return labels;
  }
  return read_labels(path);
}

}  // namespace imgobf
