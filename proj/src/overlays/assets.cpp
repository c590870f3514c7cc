#include "imgobf/overlays/assets.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "imgobf/core/error.hpp"
#include "imgobf/io/codec.hpp"
#include "imgobf/io/files.hpp"

namespace imgobf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Category {
  const char* key;
  int count;
  bool optional;
};

constexpr Category kFileCategories[] = {
    {"photos", kNumPhotos, false},   {"scenes", kNumScenes, false}, {"icons", kNumIcons, false},
    {"patterns", kNumPatterns, false}, {"patches", kNumPatches, false}, {"styles", kNumStyles, true},
    {"textures", kNumTextures, true},
};

class Verifier {
 public:
  explicit Verifier(fs::path root) : root_(std::move(root)) {}

  std::vector<std::string> issues;

  void issue(std::string msg) { issues.push_back(std::move(msg)); }

  // Checks existence and checksum; returns the content hash when readable.
  std::optional<std::string> check_file(const json& entry, const char* file_key, const char* sha_key,
                                        const std::string& label) {
    if (!entry.contains(file_key) || !entry[file_key].is_string()) {
      issue(label + ": missing '" + file_key + "'");
      return std::nullopt;
    }
    const std::string rel = entry[file_key].get<std::string>();
    const fs::path path = root_ / rel;
    if (!fs::is_regular_file(path)) {
      issue(label + ": missing file " + rel);
      return std::nullopt;
    }
    const std::string actual = io::sha256_file(path);
    if (!entry.contains(sha_key) || !entry[sha_key].is_string()) {
      issue(label + ": missing '" + sha_key + "'");
    } else if (entry[sha_key].get<std::string>() != actual) {
      issue("checksum mismatch for " + rel + " (manifest " + entry[sha_key].get<std::string>() + ", file " +
            actual + ")");
    }
    return actual;
  }

  std::optional<io::Raster8> decode(const json& entry, const char* file_key, const std::string& label) {
    try {
      return io::decode_image(io::read_bytes(root_ / entry.at(file_key).get<std::string>()));
    } catch (const std::exception& e) {
      issue(label + ": cannot decode: " + e.what());
      return std::nullopt;
    }
  }

 private:
  fs::path root_;
};

std::array<Point2, 4> parse_quad(const json& q) {
  std::array<Point2, 4> out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = {q.at(i).at(0).get<double>(), q.at(i).at(1).get<double>()};
  return out;
}

bool is_convex(const std::array<Point2, 4>& q) {
  int sign = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2 a = q[i];
    const Point2 b = q[(i + 1) % 4];
    const Point2 c = q[(i + 2) % 4];
    const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
    const int s = cross > 0 ? 1 : (cross < 0 ? -1 : 0);
    if (s == 0) return false;
    if (sign == 0) sign = s;
    if (s != sign) return false;
  }
  return true;
}

json read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  if (!fs::is_regular_file(path)) fail(ErrorCode::Io, "asset pack has no manifest.json: " + dir.string());
  try {
    return json::parse(io::read_text(path));
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Format, std::string("manifest.json is not valid JSON: ") + e.what());
  }
}

}  // namespace

std::vector<std::string> verify_asset_pack(const fs::path& dir) {
  Verifier v(dir);
  json m;
  try {
    m = read_manifest(dir);
  } catch (const Error& e) {
    return {e.what()};
  }
  if (!m.is_object()) return {"manifest.json must be an object"};
  if (m.value("format_version", 0) != kAssetFormatVersion) {
    v.issue("unsupported format_version (expected " + std::to_string(kAssetFormatVersion) + ")");
  }

  std::set<std::string> photo_hashes;
  for (const auto& cat : kFileCategories) {
    if (!m.contains(cat.key)) {
      if (!cat.optional) v.issue(std::string("missing category '") + cat.key + "'");
      continue;
    }
    const json& list = m[cat.key];
    if (!list.is_array()) {
      v.issue(std::string("category '") + cat.key + "' must be an array");
      continue;
    }
    const bool empty_optional = cat.optional && list.empty();
    if (!empty_optional && list.size() != static_cast<std::size_t>(cat.count)) {
      v.issue(std::string("category '") + cat.key + "' has " + std::to_string(list.size()) + " entries, expected " +
              std::to_string(cat.count));
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string label = std::string(cat.key) + "[" + std::to_string(i) + "]";
      const auto hash = v.check_file(list[i], "file", "sha256", label);
      if (!hash) continue;
      const std::string key = cat.key;
      if (key == "photos") photo_hashes.insert(*hash);
      if (key != "scenes") continue;

      if (photo_hashes.count(*hash)) v.issue(label + ": scene photo duplicates an overlay photo");
      const auto mask_hash = v.check_file(list[i], "mask", "mask_sha256", label + ".mask");
      const auto photo = v.decode(list[i], "file", label);
      if (mask_hash && photo) {
        const auto mask = v.decode(list[i], "mask", label + ".mask");
        if (mask && (mask->width != photo->width || mask->height != photo->height)) {
          v.issue(label + ": occlusion mask size differs from the photo");
        }
      }
      try {
        const auto quad = parse_quad(list[i].at("quad"));
        if (photo) {
          for (const auto& p : quad) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < -0.5 || p.y < -0.5 ||
                p.x > photo->width - 0.5 || p.y > photo->height - 0.5) {
              v.issue(label + ": placement quad leaves the photo");
              break;
            }
          }
        }
        if (has_collinear_triple(quad) || !is_convex(quad)) v.issue(label + ": placement quad is degenerate");
      } catch (const json::exception&) {
        v.issue(label + ": 'quad' must be 4 [x, y] points");
      }
    }
  }
  if (!m.contains("colors") || !m["colors"].is_array() || m["colors"].size() != kNumColors) {
    v.issue("category 'colors' must list exactly " + std::to_string(kNumColors) + " colors");
  } else {
    for (const auto& c : m["colors"]) {
      const bool ok = c.contains("rgb") && c["rgb"].is_array() && c["rgb"].size() == 3 &&
                      std::all_of(c["rgb"].begin(), c["rgb"].end(),
                                  [](const json& x) { return x.is_number_integer() && x.get<int>() >= 0 && x.get<int>() <= 255; });
      if (!ok) v.issue("colors: every entry needs an 'rgb' triple of 0..255 integers");
    }
  }
  if (!m.contains("texts") || !m["texts"].is_array() || m["texts"].size() != kNumTexts) {
    v.issue("category 'texts' must list exactly " + std::to_string(kNumTexts) + " strings");
  } else {
    for (const auto& t : m["texts"]) {
      if (!t.is_string() || t.get<std::string>().empty()) v.issue("texts: every entry must be a non-empty string");
    }
  }
  if (!m.contains("font") || !m["font"].is_object()) {
    v.issue("missing 'font'");
  } else if (v.check_file(m["font"], "file", "sha256", "font")) {
    try {
      const auto& f = m["font"];
      const auto atlas = v.decode(f, "file", "font");
      if (atlas) {
        GlyphAtlas::from_raster(*atlas, f.at("glyph_width").get<int>(), f.at("glyph_height").get<int>(),
                                static_cast<char>(f.at("first_char").get<int>()), f.at("glyph_count").get<int>(),
                                f.at("columns").get<int>());
      }
    } catch (const std::exception& e) {
      v.issue(std::string("font: ") + e.what());
    }
  }
  return v.issues;
}

AssetPack load_asset_pack(const fs::path& dir) {
  const auto issues = verify_asset_pack(dir);
  if (!issues.empty()) {
    std::string msg = "invalid asset pack " + dir.string() + ":";
    bool checksum = false;
    for (const auto& i : issues) {
      msg += "\n  " + i;
      checksum = checksum || i.rfind("checksum mismatch", 0) == 0;
    }
    fail(checksum ? ErrorCode::Checksum : ErrorCode::Format, msg);
  }
  const json m = read_manifest(dir);
  AssetPack pack;
  pack.root = dir;
  pack.manifest_sha256 = io::sha256_file(dir / "manifest.json");
  auto path_of = [&](const json& e, const char* key = "file") { return dir / e.at(key).get<std::string>(); };

  for (const auto& e : m["photos"]) pack.photos.push_back(io::read_image(path_of(e)));
  for (const auto& e : m["scenes"]) {
    pack.scenes.push_back({e.value("name", std::string()), io::read_image(path_of(e)), parse_quad(e["quad"]),
                           io::read_mask(path_of(e, "mask"))});
  }
  for (const auto& e : m["icons"]) pack.icons.push_back(io::read_rgba(path_of(e)));
  for (const auto& e : m["patterns"]) pack.patterns.push_back(io::read_mask(path_of(e)));
  for (const auto& e : m["patches"]) pack.patches.push_back(io::read_rgba(path_of(e)));
  for (const auto& c : m["colors"]) {
    const auto rgb = c["rgb"].get<std::array<int, 3>>();
    pack.colors.push_back({c.value("name", std::string()), {rgb[0] / 255.0, rgb[1] / 255.0, rgb[2] / 255.0}});
  }
  for (const auto& t : m["texts"]) pack.texts.push_back(t.get<std::string>());
  const auto& f = m["font"];
  pack.font = GlyphAtlas::from_raster(io::decode_image(io::read_bytes(path_of(f))), f["glyph_width"].get<int>(),
                                      f["glyph_height"].get<int>(), static_cast<char>(f["first_char"].get<int>()),
                                      f["glyph_count"].get<int>(), f["columns"].get<int>());
  if (m.contains("styles")) {
    for (const auto& e : m["styles"]) pack.styles.push_back(path_of(e));
  }
  if (m.contains("textures")) {
    for (const auto& e : m["textures"]) pack.textures.push_back(path_of(e));
  }
  return pack;
}

}  // namespace imgobf
