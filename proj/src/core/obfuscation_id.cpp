#include "imgobf/core/obfuscation_id.hpp"

#include <array>

namespace imgobf {

namespace {

using K = ObfuscationKind;
using S = Split;
using O = ObfuscationId;

constexpr std::array<ObfuscationInfo, kNumObfuscations> kTable{{
    {O::ColorNoiseBlocks, "ColorNoiseBlocks", K::ColorChange, S::Training, false, false},
    {O::Halftoning, "Halftoning", K::ColorChange, S::Training, false, false},
    {O::InvertLines, "InvertLines", K::ColorChange, S::Training, false, false},
    {O::LowContrastTriangles, "LowContrastTriangles", K::ColorChange, S::HoldOut, false, false},
    {O::LineShift, "LineShift", K::Transformation, S::Training, false, false},
    {O::PerspectiveTransform, "PerspectiveTransform", K::Transformation, S::Training, false, false},
    {O::RotateBlocks, "RotateBlocks", K::Transformation, S::Training, false, false},
    {O::RotateImage, "RotateImage", K::Transformation, S::Training, false, false},
    {O::SwirlWarp, "SwirlWarp", K::Transformation, S::Training, false, false},
    {O::WavyColorWarp, "WavyColorWarp", K::Transformation, S::Training, false, false},
    {O::BackgroundBlurComposition, "BackgroundBlurComposition", K::Composition, S::Training, false, false},
    {O::HighContrastBorder, "HighContrastBorder", K::Composition, S::Training, false, false},
    {O::PerspectiveComposition, "PerspectiveComposition", K::Composition, S::HoldOut, true, false},
    {O::PhotoComposition, "PhotoComposition", K::Composition, S::Training, true, false},
    {O::ColorPatternOverlay, "ColorPatternOverlay", K::Overlay, S::HoldOut, true, false},
    {O::IconOverlay, "IconOverlay", K::Overlay, S::Training, true, false},
    {O::ImageOverlay, "ImageOverlay", K::Overlay, S::Training, true, false},
    {O::Interleave, "Interleave", K::Overlay, S::Training, true, false},
    {O::TextOverlay, "TextOverlay", K::Overlay, S::Training, true, false},
    {O::AdversarialPatches, "AdversarialPatches", K::MLBased, S::Training, true, false},
    {O::StyleTransfer, "StyleTransfer", K::MLBased, S::Training, false, true},
    {O::Texturize, "Texturize", K::MLBased, S::Training, false, true},
}};

}  // namespace

std::span<const ObfuscationInfo> all_obfuscations() noexcept { return kTable; }

const ObfuscationInfo& info(ObfuscationId id) noexcept { return kTable[static_cast<std::size_t>(id)]; }

std::optional<ObfuscationId> parse_obfuscation(std::string_view name) noexcept {
  for (const auto& entry : kTable) {
    if (entry.name == name) return entry.id;
  }
  return std::nullopt;
}

std::string obfuscation_names_joined() {
  std::string out;
  for (const auto& entry : kTable) {
    if (!out.empty()) out += ", ";
    out += entry.name;
  }
  return out;
}

}  // namespace imgobf
