#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "imgobf/ml/stylize.hpp"
#include "imgobf/overlays/assets.hpp"
#include "imgobf/pipeline/params.hpp"

namespace imgobf {

struct CorpusImage {
  std::string image_id;  // file stem
  std::filesystem::path path;
};

/// PNG and JPEG files directly inside `dir`, sorted by image id. Duplicate
/// stems are an error.
std::vector<CorpusImage> list_corpus(const std::filesystem::path& dir);

/// CSV with header `image_id,class_id`; class ids must lie in 0..999.
std::map<std::string, int> read_labels(const std::filesystem::path& path);

struct OutputRecord {
  ObfuscationId obfuscation;
  std::string path;  // relative to the output directory
  std::string sha256;
  SampledParams params;
};

struct ImageRecord {
  std::string image_id;
  std::string source;  // file name inside the corpus directory
  int class_id = -1;
  std::string clean_path;
  std::string clean_sha256;
  std::vector<OutputRecord> outputs;
};

struct FailureRecord {
  std::string image_id;
  std::string stage;  // "load", "label", "clean" or an obfuscation name
  std::string message;
};

struct CorpusManifest {
  std::uint64_t global_seed = 0;
  std::string pack_checksum;
  std::string ranges_checksum;
  std::string tool_version;
  std::vector<ObfuscationId> obfuscations;
  std::vector<ImageRecord> records;
  std::vector<FailureRecord> failures;

  nlohmann::json to_json() const;
  static CorpusManifest from_json(const nlohmann::json& doc);
  /// Canonical text: sorted keys, two-space indent, trailing newline.
  std::string serialize() const;
};

struct CorpusRun {
  std::filesystem::path corpus_dir;
  std::filesystem::path labels_file;
  std::filesystem::path out_dir;
  std::vector<ObfuscationId> obfuscations;
  std::uint64_t global_seed = 0;
  int workers = 1;
  const ParamRanges* ranges = nullptr;
  const AssetPack* pack = nullptr;            // required when any selected obfuscation uses assets
  const StylizationBackend* backend = nullptr;  // defaults to NullBackend
  std::function<void(const std::string&)> progress;
};

/// Produces out/clean/<id>.png and out/<Name>/<id>.png for every image and
/// selected obfuscation, then writes out/manifest.json atomically. Per-image
/// failures are recorded in the manifest; unreadable corpus or labels throw.
CorpusManifest run_corpus(const CorpusRun& run);

/// Re-hashes every file the manifest in `out_dir` references. Empty means valid.
std::vector<std::string> verify_manifest(const std::filesystem::path& out_dir);

}  // namespace imgobf
