#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace imgobf {

enum class ObfuscationId : std::uint8_t {
  ColorNoiseBlocks,
  Halftoning,
  InvertLines,
  LowContrastTriangles,
  LineShift,
  PerspectiveTransform,
  RotateBlocks,
  RotateImage,
  SwirlWarp,
  WavyColorWarp,
  BackgroundBlurComposition,
  HighContrastBorder,
  PerspectiveComposition,
  PhotoComposition,
  ColorPatternOverlay,
  IconOverlay,
  ImageOverlay,
  Interleave,
  TextOverlay,
  AdversarialPatches,
  StyleTransfer,
  Texturize,
};

inline constexpr int kNumObfuscations = 22;

enum class ObfuscationKind { ColorChange, Transformation, Composition, Overlay, MLBased };
enum class Split { Training, HoldOut };

struct ObfuscationInfo {
  ObfuscationId id;
  std::string_view name;
  ObfuscationKind kind;
  Split split;
  bool uses_assets;
  bool uses_backend;
};

/// All 22 obfuscations in declaration order.
std::span<const ObfuscationInfo> all_obfuscations() noexcept;
const ObfuscationInfo& info(ObfuscationId id) noexcept;
inline std::string_view name_of(ObfuscationId id) noexcept { return info(id).name; }
std::optional<ObfuscationId> parse_obfuscation(std::string_view name) noexcept;

/// Comma separated list of every valid name, for diagnostics.
std::string obfuscation_names_joined();

}  // namespace imgobf
