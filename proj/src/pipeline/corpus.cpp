#include "imgobf/pipeline/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "imgobf/core/error.hpp"
#include "imgobf/core/resample.hpp"
#include "imgobf/core/superclass.hpp"
#include "imgobf/io/codec.hpp"
#include "imgobf/io/files.hpp"
#include "imgobf/pipeline/obfuscate.hpp"

namespace imgobf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct ImageResult {
  std::optional<ImageRecord> record;
  std::vector<FailureRecord> failures;
};

ImageResult process_image(const CorpusRun& run, const CorpusImage& image, const std::map<std::string, int>& labels,
                          const StylizationBackend& backend) {
  ImageResult res;
  const auto label = labels.find(image.image_id);
  if (label == labels.end()) {
    res.failures.push_back({image.image_id, "label", "no label for image"});
    return res;
  }
  ImageBuffer clean;
  try {
    clean = central_crop_resize(io::read_image(image.path), kBenchmarkSide);
  } catch (const std::exception& e) {
    res.failures.push_back({image.image_id, "load", e.what()});
    return res;
  }

  ImageRecord rec;
  rec.image_id = image.image_id;
  rec.source = image.path.filename().string();
  rec.class_id = label->second;
  rec.clean_path = "clean/" + image.image_id + ".png";
  try {
    rec.clean_sha256 = io::sha256_hex(io::write_png(run.out_dir / rec.clean_path, clean));
  } catch (const std::exception& e) {
    res.failures.push_back({image.image_id, "clean", e.what()});
    return res;
  }

  for (const ObfuscationId id : run.obfuscations) {
    const std::string name(name_of(id));
    try {
      OutputRecord out;
      out.obfuscation = id;
      out.params = sample_params(*run.ranges, id, run.global_seed, image.image_id);
      const ImageBuffer result = obfuscate_image(clean, out.params, run.pack, backend);
      out.path = name + "/" + image.image_id + ".png";
      out.sha256 = io::sha256_hex(io::write_png(run.out_dir / out.path, result));
      rec.outputs.push_back(std::move(out));
    } catch (const std::exception& e) {
      res.failures.push_back({image.image_id, name, e.what()});
    }
  }
  res.record = std::move(rec);
  return res;
}

}  // namespace

std::vector<CorpusImage> list_corpus(const fs::path& dir) {
  if (!fs::is_directory(dir)) fail(ErrorCode::Io, "corpus directory not found: " + dir.string());
  std::vector<CorpusImage> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = lower(entry.path().extension().string());
    if (ext != ".png" && ext != ".jpg" && ext != ".jpeg") continue;
    out.push_back({entry.path().stem().string(), entry.path()});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.image_id < b.image_id; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].image_id == out[i - 1].image_id) {
      fail(ErrorCode::InvalidArgument, "duplicate image id in corpus: " + out[i].image_id);
    }
  }
  return out;
}

std::map<std::string, int> read_labels(const fs::path& path) {
  std::istringstream in(io::read_text(path));
  std::string line;
  if (!std::getline(in, line) || lower(trim(line)) != "image_id,class_id") {
    fail(ErrorCode::Format, path.string() + ": expected header image_id,class_id");
  }
  std::map<std::string, int> labels;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (comma == std::string::npos) fail(ErrorCode::Format, where + ": expected image_id,class_id");
    const std::string id = trim(line.substr(0, comma));
    const std::string cls = trim(line.substr(comma + 1));
    int value = -1;
    try {
      std::size_t used = 0;
      value = std::stoi(cls, &used);
      if (used != cls.size()) value = -1;
    } catch (const std::exception&) {
      value = -1;
    }
    if (value < 0 || value >= kNumImageNetClasses) {
      fail(ErrorCode::Format, where + ": class id \"" + cls + "\" is not in 0..999");
    }
    if (id.empty() || !labels.emplace(id, value).second) {
      fail(ErrorCode::Format, where + ": empty or duplicate image id \"" + id + "\"");
    }
  }
  return labels;
}

json CorpusManifest::to_json() const {
  json names = json::array();
  for (const auto id : obfuscations) names.push_back(std::string(name_of(id)));
  json recs = json::array();
  for (const auto& r : records) {
    json outs = json::object();
    for (const auto& o : r.outputs) {
      outs[std::string(name_of(o.obfuscation))] = {{"path", o.path}, {"sha256", o.sha256},
                                                   {"params", params_to_json(o.params)}};
    }
    recs.push_back({{"image_id", r.image_id},
                    {"source", r.source},
                    {"class_id", r.class_id},
                    {"clean", {{"path", r.clean_path}, {"sha256", r.clean_sha256}}},
                    {"outputs", outs}});
  }
  json fails = json::array();
  for (const auto& f : failures) fails.push_back({{"image_id", f.image_id}, {"stage", f.stage}, {"message", f.message}});
  return {{"header",
           {{"global_seed", global_seed},
            {"pack_checksum", pack_checksum},
            {"ranges_checksum", ranges_checksum},
            {"tool_version", tool_version},
            {"obfuscations", names}}},
          {"records", recs},
          {"failures", fails}};
}

CorpusManifest CorpusManifest::from_json(const json& doc) {
  CorpusManifest m;
  try {
    const auto& h = doc.at("header");
    m.global_seed = h.at("global_seed").get<std::uint64_t>();
    m.pack_checksum = h.at("pack_checksum").get<std::string>();
    m.ranges_checksum = h.at("ranges_checksum").get<std::string>();
    m.tool_version = h.at("tool_version").get<std::string>();
    for (const auto& n : h.at("obfuscations")) {
      const auto id = parse_obfuscation(n.get<std::string>());
      if (!id) fail(ErrorCode::Format, "manifest: unknown obfuscation " + n.dump());
      m.obfuscations.push_back(*id);
    }
    for (const auto& r : doc.at("records")) {
      ImageRecord rec;
      rec.image_id = r.at("image_id").get<std::string>();
      rec.source = r.at("source").get<std::string>();
      rec.class_id = r.at("class_id").get<int>();
      rec.clean_path = r.at("clean").at("path").get<std::string>();
      rec.clean_sha256 = r.at("clean").at("sha256").get<std::string>();
      for (const auto& [name, o] : r.at("outputs").items()) {
        const auto id = parse_obfuscation(name);
        if (!id) fail(ErrorCode::Format, "manifest: unknown obfuscation " + name);
        rec.outputs.push_back({*id, o.at("path").get<std::string>(), o.at("sha256").get<std::string>(),
                               params_from_json(o.at("params"))});
      }
      m.records.push_back(std::move(rec));
    }
    for (const auto& f : doc.at("failures")) {
      m.failures.push_back({f.at("image_id").get<std::string>(), f.at("stage").get<std::string>(),
                            f.at("message").get<std::string>()});
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::Format, std::string("manifest: ") + e.what());
  }
  return m;
}

std::string CorpusManifest::serialize() const { return to_json().dump(2) + "\n"; }

CorpusManifest run_corpus(const CorpusRun& run) {
  require(run.ranges != nullptr, "run_corpus: ranges required");
  require(run.workers >= 1, "run_corpus: worker count must be >= 1");
  std::set<ObfuscationId> seen;
  for (const auto id : run.obfuscations) {
    require(seen.insert(id).second, "run_corpus: duplicate obfuscation " + std::string(name_of(id)));
    if (!run.ranges->covers(id)) {
      fail(ErrorCode::InvalidArgument, "ranges: no entry for " + std::string(name_of(id)));
    }
    if (info(id).uses_assets && run.pack == nullptr) {
      fail(ErrorCode::InvalidArgument, std::string(name_of(id)) + " requires an asset pack");
    }
  }
  const auto images = list_corpus(run.corpus_dir);
  const auto labels = read_labels(run.labels_file);
  const NullBackend null_backend;
  const StylizationBackend& backend = run.backend ? *run.backend : null_backend;

  std::vector<ImageResult> results(images.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < images.size(); i = next++) {
      results[i] = process_image(run, images[i], labels, backend);
      const std::size_t n = ++done;
      if (run.progress) {
        std::lock_guard lock(progress_mutex);
        run.progress(std::to_string(n) + "/" + std::to_string(images.size()) + " " + images[i].image_id);
      }
    }
  };
  const int threads = std::min<int>(run.workers, static_cast<int>(std::max<std::size_t>(images.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  CorpusManifest m;
  m.global_seed = run.global_seed;
  m.pack_checksum = run.pack ? run.pack->manifest_sha256 : "";
  m.ranges_checksum = run.ranges->checksum();
  m.tool_version = IMGOBF_VERSION;
  m.obfuscations = run.obfuscations;
  std::sort(m.obfuscations.begin(), m.obfuscations.end());
  for (auto& r : results) {
    if (r.record) m.records.push_back(std::move(*r.record));
    for (auto& f : r.failures) m.failures.push_back(std::move(f));
  }
  io::write_atomic(run.out_dir / "manifest.json", m.serialize());
  return m;
}

std::vector<std::string> verify_manifest(const fs::path& out_dir) {
  std::vector<std::string> issues;
  CorpusManifest m;
  try {
    m = CorpusManifest::from_json(json::parse(io::read_text(out_dir / "manifest.json")));
  } catch (const std::exception& e) {
    return {std::string("manifest unreadable: ") + e.what()};
  }
  std::set<std::string> ids;
  auto check = [&](const std::string& rel, const std::string& expected) {
    const fs::path p = out_dir / rel;
    if (!fs::exists(p)) {
      issues.push_back("missing output " + rel);
      return;
    }
    const std::string actual = io::sha256_file(p);
    if (actual != expected) issues.push_back("checksum mismatch for " + rel + " (manifest " + expected + ", file " + actual + ")");
  };
  for (const auto& r : m.records) {
    if (!ids.insert(r.image_id).second) issues.push_back("duplicate image id " + r.image_id);
    check(r.clean_path, r.clean_sha256);
    for (const auto& o : r.outputs) check(o.path, o.sha256);
  }
  return issues;
}

}  // namespace imgobf
