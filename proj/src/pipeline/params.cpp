#include "imgobf/pipeline/params.hpp"

#include <algorithm>
#include <cmath>

#include "imgobf/core/error.hpp"
#include "imgobf/io/files.hpp"

namespace imgobf {

namespace detail {
extern const std::string_view kEmbeddedRanges;
}

using nlohmann::json;

namespace {

using Names = std::vector<std::string_view>;

const std::array<Names, kNumObfuscations>& name_table() {
  static const std::array<Names, kNumObfuscations> table{{
      {"block_size"},
      {"block_size", "technique"},
      {"horizontal", "width"},
      {"apex_x", "factor_left", "factor_middle", "factor_right", "scale"},
      {"horizontal", "shift", "width"},
      {"jitter_radius"},
      {"block_size", "rotations"},
      {"degrees"},
      {"center_x", "center_y", "radius", "strength"},
      {"amplitude", "hue_shift", "wavelength"},
      {"blur_sigma", "height_factor", "width_factor"},
      {"border", "contrast"},
      {"scene"},
      {"photo", "position_x", "position_y", "shrink"},
      {"alpha", "color", "pattern"},
      {"alpha", "count", "icon"},
      {"alpha", "photo"},
      {"alpha", "horizontal", "photo", "width"},
      {"alpha", "color", "size", "text"},
      {"corners", "patch", "shrink"},
      {"resize_factor", "style"},
      {"resize_factor", "texture"},
  }};
  return table;
}

RangeSpec parse_range(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    fail(ErrorCode::Format, where + ": range needs a string \"type\"");
  }
  RangeSpec r;
  const std::string type = j["type"].get<std::string>();
  if (type == "choice") {
    r.type = RangeSpec::Type::Choice;
    if (!j.contains("values") || !j["values"].is_array() || j["values"].empty()) {
      fail(ErrorCode::Format, where + ": choice needs a nonempty \"values\" array");
    }
    for (const auto& v : j["values"]) {
      if (!v.is_number_integer()) fail(ErrorCode::Format, where + ": choice values must be integers");
      r.values.push_back(v.get<std::int64_t>());
    }
    return r;
  }
  if (type == "real") {
    r.type = RangeSpec::Type::Real;
  } else if (type == "int") {
    r.type = RangeSpec::Type::Int;
  } else {
    fail(ErrorCode::Format, where + ": unknown range type \"" + type + "\"");
  }
  for (const char* k : {"lo", "hi"}) {
    if (!j.contains(k) || !j[k].is_number()) fail(ErrorCode::Format, where + ": missing numeric \"" + k + "\"");
    if (r.type == RangeSpec::Type::Int && !j[k].is_number_integer()) {
      fail(ErrorCode::Format, where + ": int bounds must be integers");
    }
  }
  r.lo = j["lo"].get<double>();
  r.hi = j["hi"].get<double>();
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
    fail(ErrorCode::Format, where + ": requires finite lo <= hi");
  }
  return r;
}

json range_to_json(const RangeSpec& r) {
  switch (r.type) {
    case RangeSpec::Type::Choice: return {{"type", "choice"}, {"values", r.values}};
    case RangeSpec::Type::Int:
      return {{"type", "int"}, {"lo", static_cast<std::int64_t>(r.lo)}, {"hi", static_cast<std::int64_t>(r.hi)}};
    case RangeSpec::Type::Real: break;
  }
  return {{"type", "real"}, {"lo", r.lo}, {"hi", r.hi}};
}

}  // namespace

std::span<const std::string_view> parameter_names(ObfuscationId id) {
  return name_table()[static_cast<std::size_t>(id)];
}

const ParamRanges& ParamRanges::builtin() {
  static const ParamRanges r = from_json_text(detail::kEmbeddedRanges);
  return r;
}

ParamRanges ParamRanges::from_json_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Format, std::string("ranges: invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("version") || !doc["version"].is_string() || !doc.contains("obfuscations") ||
      !doc["obfuscations"].is_object()) {
    fail(ErrorCode::Format, "ranges: expected {\"version\": string, \"obfuscations\": object}");
  }
  ParamRanges out;
  out.version_ = doc["version"].get<std::string>();
  for (const auto& [name, params] : doc["obfuscations"].items()) {
    const auto id = parse_obfuscation(name);
    if (!id) fail(ErrorCode::Format, "ranges: unknown obfuscation \"" + name + "\"");
    if (!params.is_object()) fail(ErrorCode::Format, "ranges: " + name + " must map parameter names to ranges");
    auto& dst = out.ranges_[*id];
    for (const auto& [param, spec] : params.items()) {
      const auto names = parameter_names(*id);
      if (std::find(names.begin(), names.end(), param) == names.end()) {
        fail(ErrorCode::Format, "ranges: " + name + " has no parameter \"" + param + "\"");
      }
      dst[param] = parse_range(spec, name + "." + param);
    }
    for (const auto& p : parameter_names(*id)) {
      if (!dst.contains(std::string(p))) {
        fail(ErrorCode::Format, "ranges: " + name + " is missing parameter \"" + std::string(p) + "\"");
      }
    }
  }
  out.checksum_ = io::sha256_hex(out.to_json().dump());
  return out;
}

ParamRanges ParamRanges::from_file(const std::filesystem::path& path) {
  return from_json_text(io::read_text(path));
}

bool ParamRanges::covers(ObfuscationId id) const noexcept { return ranges_.contains(id); }

const std::map<std::string, RangeSpec>& ParamRanges::of(ObfuscationId id) const {
  const auto it = ranges_.find(id);
  if (it == ranges_.end()) {
    fail(ErrorCode::InvalidArgument, "ranges: no entry for " + std::string(name_of(id)));
  }
  return it->second;
}

json ParamRanges::to_json() const {
  json obf = json::object();
  for (const auto& [id, params] : ranges_) {
    json p = json::object();
    for (const auto& [name, r] : params) p[name] = range_to_json(r);
    obf[std::string(name_of(id))] = p;
  }
  return {{"version", version_}, {"obfuscations", obf}};
}

std::int64_t SampledParams::integer(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) fail(ErrorCode::InvalidArgument, std::string(name_of(obfuscation)) + ": missing " + key);
  if (const auto* d = std::get_if<double>(&it->second)) return static_cast<std::int64_t>(std::floor(*d));
  return std::get<std::int64_t>(it->second);
}

double SampledParams::real(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) fail(ErrorCode::InvalidArgument, std::string(name_of(obfuscation)) + ": missing " + key);
  if (const auto* i = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*i);
  return std::get<double>(it->second);
}

SampledParams sample_params(const ParamRanges& ranges, ObfuscationId id, RngStream& rng) {
  SampledParams out;
  out.obfuscation = id;
  for (const auto& [name, r] : ranges.of(id)) {
    switch (r.type) {
      case RangeSpec::Type::Real:
        out.values[name] = rng.uniform(r.lo, r.hi);
        break;
      case RangeSpec::Type::Int: {
        const auto lo = static_cast<std::int64_t>(r.lo);
        const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(r.hi) - lo) + 1;
        out.values[name] = lo + static_cast<std::int64_t>(rng.uniform_int(span));
        break;
      }
      case RangeSpec::Type::Choice:
        out.values[name] = r.values[static_cast<std::size_t>(rng.uniform_int(r.values.size()))];
        break;
    }
  }
  return out;
}

SampledParams sample_params(const ParamRanges& ranges, ObfuscationId id, std::uint64_t global_seed,
                            std::string_view image_id) {
  RngStream rng = derive_rng(global_seed, image_id, id);
  SampledParams out = sample_params(ranges, id, rng);
  out.seed = {global_seed, std::string(image_id), std::string(name_of(id))};
  return out;
}

RngStream transform_rng(const SeedTriple& seed) {
  return derive_rng(seed.global_seed, seed.image_id, seed.name + "#apply");
}

json params_to_json(const SampledParams& p) {
  json values = json::object();
  for (const auto& [k, v] : p.values) {
    std::visit([&](auto x) { values[k] = x; }, v);
  }
  return {{"obfuscation", std::string(name_of(p.obfuscation))},
          {"values", values},
          {"seed_triple", {{"global_seed", p.seed.global_seed}, {"image_id", p.seed.image_id}, {"name", p.seed.name}}}};
}

SampledParams params_from_json(const json& doc) {
  SampledParams p;
  try {
    const auto id = parse_obfuscation(doc.at("obfuscation").get<std::string>());
    if (!id) fail(ErrorCode::Format, "params: unknown obfuscation " + doc.at("obfuscation").dump());
    p.obfuscation = *id;
    for (const auto& [k, v] : doc.at("values").items()) {
      if (v.is_number_integer()) {
        p.values[k] = v.get<std::int64_t>();
      } else if (v.is_number()) {
        p.values[k] = v.get<double>();
      } else {
        fail(ErrorCode::Format, "params: value of " + k + " must be numeric");
      }
    }
    if (doc.contains("seed_triple")) {
      const auto& s = doc["seed_triple"];
      p.seed = {s.at("global_seed").get<std::uint64_t>(), s.at("image_id").get<std::string>(),
                s.at("name").get<std::string>()};
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::Format, std::string("params: ") + e.what());
  }
  return p;
}

ObfuscationParams typed_params(const SampledParams& p) {
  auto i = [&](const char* k) { return static_cast<int>(p.integer(k)); };
  auto r = [&](const char* k) { return p.real(k); };
  auto stripes = [&] { return StripeSpec{i("horizontal") != 0, i("width")}; };
  switch (p.obfuscation) {
    case ObfuscationId::ColorNoiseBlocks: return params::ColorNoiseBlocks{i("block_size")};
    case ObfuscationId::Halftoning: {
      const int t = i("technique");
      require(t >= 0 && t < kNumHalftoneTechniques, "Halftoning: technique must be 0..3");
      return params::Halftoning{i("block_size"), static_cast<HalftoneTechnique>(t)};
    }
    case ObfuscationId::InvertLines: return params::InvertLines{stripes()};
    case ObfuscationId::LowContrastTriangles:
      return params::LowContrastTriangles{{r("scale"), r("apex_x")},
                                          {r("factor_left"), r("factor_middle"), r("factor_right")}};
    case ObfuscationId::LineShift: return params::LineShift{stripes(), i("shift")};
    case ObfuscationId::PerspectiveTransform: return params::PerspectiveTransform{r("jitter_radius")};
    case ObfuscationId::RotateBlocks: return params::RotateBlocks{i("block_size"), i("rotations")};
    case ObfuscationId::RotateImage: return params::RotateImage{r("degrees")};
    case ObfuscationId::SwirlWarp:
      return params::SwirlWarp{{r("strength"), r("radius"), {r("center_x"), r("center_y")}}};
    case ObfuscationId::WavyColorWarp: return params::WavyColorWarp{{r("wavelength"), r("amplitude"), r("hue_shift")}};
    case ObfuscationId::BackgroundBlurComposition:
      return params::BackgroundBlurComposition{r("width_factor"), r("height_factor"), r("blur_sigma")};
    case ObfuscationId::HighContrastBorder: return params::HighContrastBorder{r("contrast"), i("border")};
    case ObfuscationId::PerspectiveComposition: return params::PerspectiveComposition{i("scene")};
    case ObfuscationId::PhotoComposition:
      return params::PhotoComposition{i("photo"), r("shrink"), r("position_x"), r("position_y")};
    case ObfuscationId::ColorPatternOverlay: return params::ColorPatternOverlay{i("pattern"), i("color"), r("alpha")};
    case ObfuscationId::IconOverlay: return params::IconOverlay{i("icon"), i("count"), r("alpha")};
    case ObfuscationId::ImageOverlay: return params::ImageOverlay{i("photo"), r("alpha")};
    case ObfuscationId::Interleave: return params::Interleave{i("photo"), stripes(), r("alpha")};
    case ObfuscationId::TextOverlay: return params::TextOverlay{i("text"), i("color"), i("size"), r("alpha")};
    case ObfuscationId::AdversarialPatches: {
      const int c = i("corners");
      require(c >= 0 && c <= 15, "AdversarialPatches: corners must be a 4-bit mask");
      return params::AdversarialPatches{i("patch"), r("shrink"), static_cast<unsigned>(c)};
    }
    case ObfuscationId::StyleTransfer: return params::StyleTransfer{i("style"), r("resize_factor")};
    case ObfuscationId::Texturize: return params::Texturize{i("texture"), r("resize_factor")};
  }
  fail(ErrorCode::InvalidArgument, "unknown obfuscation id");
}

}  // namespace imgobf
