#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "imgobf/core/image.hpp"
#include "imgobf/overlays/font.hpp"
#include "imgobf/transforms/geometric.hpp"

namespace imgobf {

inline constexpr int kNumPhotos = 10;
inline constexpr int kNumScenes = 14;
inline constexpr int kNumIcons = 10;
inline constexpr int kNumPatterns = 9;
inline constexpr int kNumColors = 9;
inline constexpr int kNumTexts = 13;
inline constexpr int kNumPatches = 3;
inline constexpr int kNumStyles = 7;
inline constexpr int kNumTextures = 10;
inline constexpr int kAssetFormatVersion = 1;

/// Photo plus the quad (TL, TR, BR, BL) an image is composed into and the
/// pixels of the photo that stay in front of it.
struct SceneAsset {
  std::string name;
  ImageBuffer photo;
  std::array<Point2, 4> quad;
  Mask occlusion;
};

struct NamedColor {
  std::string name;
  Rgb rgb;
};

/// Immutable after load_asset_pack().
struct AssetPack {
  std::filesystem::path root;
  std::string manifest_sha256;
  std::vector<ImageBuffer> photos;
  std::vector<SceneAsset> scenes;
  std::vector<RgbaImage> icons;
  std::vector<Mask> patterns;
  std::vector<NamedColor> colors;
  std::vector<std::string> texts;
  GlyphAtlas font;
  std::vector<RgbaImage> patches;
  // Reference images for the stylization backends; empty when not shipped.
  std::vector<std::filesystem::path> styles;
  std::vector<std::filesystem::path> textures;
};

/// Every problem found in the pack directory: manifest shape, counts,
/// missing files, checksum mismatches, scene geometry. Empty means valid.
std::vector<std::string> verify_asset_pack(const std::filesystem::path& dir);

/// Verifies, then decodes everything. Throws ErrorCode::Checksum on checksum
/// mismatches and ErrorCode::Format on any other issue.
AssetPack load_asset_pack(const std::filesystem::path& dir);

/// Writes the procedurally generated CC0 pack (manifest.json plus PNGs).
void generate_default_pack(const std::filesystem::path& dir);

}  // namespace imgobf
