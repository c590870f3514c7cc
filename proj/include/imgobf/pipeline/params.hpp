#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "imgobf/core/obfuscation_id.hpp"
#include "imgobf/core/rng.hpp"
#include "imgobf/transforms/geometric.hpp"
#include "imgobf/transforms/pixel.hpp"

namespace imgobf {

struct RangeSpec {
  enum class Type { Real, Int, Choice };
  Type type = Type::Real;
  double lo = 0.0;  // Real: [lo, hi); Int: inclusive bounds
  double hi = 0.0;
  std::vector<std::int64_t> values;  // Choice
};

/// Parameter names each obfuscation consumes, sorted.
std::span<const std::string_view> parameter_names(ObfuscationId id);

/// Per-obfuscation sampling ranges. Parsed from
/// {"version": "...", "obfuscations": {Name: {param: {"type": "real"|"int"|"choice", ...}}}}.
class ParamRanges {
 public:
  /// The default configuration compiled into the library.
  static const ParamRanges& builtin();
  static ParamRanges from_json_text(std::string_view text);
  static ParamRanges from_file(const std::filesystem::path& path);

  const std::string& version() const noexcept { return version_; }
  /// SHA-256 of the canonical (sorted-key, compact) serialization.
  const std::string& checksum() const noexcept { return checksum_; }
  bool covers(ObfuscationId id) const noexcept;
  const std::map<std::string, RangeSpec>& of(ObfuscationId id) const;
  nlohmann::json to_json() const;

 private:
  std::string version_;
  std::string checksum_;
  std::map<ObfuscationId, std::map<std::string, RangeSpec>> ranges_;
};

using ParamValue = std::variant<std::int64_t, double>;

struct SeedTriple {
  std::uint64_t global_seed = 0;
  std::string image_id;
  std::string name;
};

struct SampledParams {
  ObfuscationId obfuscation = ObfuscationId::ColorNoiseBlocks;
  std::map<std::string, ParamValue> values;
  SeedTriple seed;

  std::int64_t integer(const std::string& key) const;
  double real(const std::string& key) const;
};

/// Draws every parameter in sorted-name order. Reals are uniform in [lo, hi),
/// integers uniform over the inclusive range, choices uniform over the set.
SampledParams sample_params(const ParamRanges& ranges, ObfuscationId id, RngStream& rng);

/// Draws from the stream of the (global_seed, image_id, name) triple.
SampledParams sample_params(const ParamRanges& ranges, ObfuscationId id, std::uint64_t global_seed,
                            std::string_view image_id);

/// Stream for randomness consumed inside a transform (noise, corner draws).
/// Derived from the same seed triple, salted so it never overlaps the
/// parameter stream.
RngStream transform_rng(const SeedTriple& seed);

nlohmann::json params_to_json(const SampledParams& p);
SampledParams params_from_json(const nlohmann::json& doc);

// Typed views of the sampled values, one per obfuscation.
namespace params {
struct ColorNoiseBlocks { int block_size; };
struct Halftoning { int block_size; HalftoneTechnique technique; };
struct InvertLines { StripeSpec stripes; };
struct LowContrastTriangles { TrianglePartition partition; std::array<double, 3> factors; };
struct LineShift { StripeSpec stripes; int shift; };
struct PerspectiveTransform { double jitter_radius; };
struct RotateBlocks { int block_size; int rotations; };
struct RotateImage { double degrees; };
struct SwirlWarp { SwirlParams swirl; };
struct WavyColorWarp { WaveParams wave; };
struct BackgroundBlurComposition { double width_factor; double height_factor; double blur_sigma; };
struct HighContrastBorder { double contrast; int border; };
struct PerspectiveComposition { int scene; };
struct PhotoComposition { int photo; double shrink; double position_x; double position_y; };
struct ColorPatternOverlay { int pattern; int color; double alpha; };
struct IconOverlay { int icon; int count; double alpha; };
struct ImageOverlay { int photo; double alpha; };
struct Interleave { int photo; StripeSpec stripes; double alpha; };
struct TextOverlay { int text; int color; int size; double alpha; };
struct AdversarialPatches { int patch; double shrink; unsigned corners; };
struct StyleTransfer { int style; double resize_factor; };
struct Texturize { int texture; double resize_factor; };
}  // namespace params

/// Alternatives in ObfuscationId order, so index() == id.
using ObfuscationParams =
    std::variant<params::ColorNoiseBlocks, params::Halftoning, params::InvertLines, params::LowContrastTriangles,
                 params::LineShift, params::PerspectiveTransform, params::RotateBlocks, params::RotateImage,
                 params::SwirlWarp, params::WavyColorWarp, params::BackgroundBlurComposition,
                 params::HighContrastBorder, params::PerspectiveComposition, params::PhotoComposition,
                 params::ColorPatternOverlay, params::IconOverlay, params::ImageOverlay, params::Interleave,
                 params::TextOverlay, params::AdversarialPatches, params::StyleTransfer, params::Texturize>;

static_assert(std::variant_size_v<ObfuscationParams> == kNumObfuscations);

/// Throws InvalidArgument when a required value is missing.
ObfuscationParams typed_params(const SampledParams& p);

}  // namespace imgobf
