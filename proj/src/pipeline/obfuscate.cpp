#include "imgobf/pipeline/obfuscate.hpp"

#include <algorithm>
#include <cmath>

#include "imgobf/core/color.hpp"
#include "imgobf/core/error.hpp"
#include "imgobf/overlays/compose.hpp"
#include "imgobf/transforms/geometric.hpp"
#include "imgobf/transforms/pixel.hpp"

namespace imgobf {

namespace {

template <class T>
const T& pick(const std::vector<T>& items, int index, const char* what) {
  if (index < 0 || static_cast<std::size_t>(index) >= items.size()) {
    fail(ErrorCode::InvalidArgument, std::string(what) + " index " + std::to_string(index) + " out of range (pack has " +
                                         std::to_string(items.size()) + ")");
  }
  return items[static_cast<std::size_t>(index)];
}

struct Dispatch {
  const ImageBuffer& img;
  const SampledParams& sampled;
  const AssetPack* pack;
  const StylizationBackend& backend;

  const AssetPack& assets() const {
    if (pack == nullptr) {
      fail(ErrorCode::InvalidArgument, std::string(name_of(sampled.obfuscation)) + " requires an asset pack");
    }
    return *pack;
  }
  RngStream rng() const { return transform_rng(sampled.seed); }

  ImageBuffer operator()(const params::ColorNoiseBlocks& p) const {
    RngStream r = rng();
    return color_noise_blocks(img, p.block_size, r);
  }
  ImageBuffer operator()(const params::Halftoning& p) const {
    RngStream r = rng();
    return halftone(img, p.block_size, p.technique, r);
  }
  ImageBuffer operator()(const params::InvertLines& p) const { return invert_lines(img, p.stripes); }
  ImageBuffer operator()(const params::LowContrastTriangles& p) const {
    return low_contrast_triangles(img, p.partition, p.factors);
  }
  ImageBuffer operator()(const params::LineShift& p) const { return line_shift(img, p.stripes, p.shift); }
  ImageBuffer operator()(const params::PerspectiveTransform& p) const {
    RngStream r = rng();
    return perspective_transform_obfuscation(img, r, p.jitter_radius);
  }
  ImageBuffer operator()(const params::RotateBlocks& p) const { return rotate_blocks(img, p.block_size, p.rotations); }
  ImageBuffer operator()(const params::RotateImage& p) const { return rotate_image(img, p.degrees); }
  ImageBuffer operator()(const params::SwirlWarp& p) const { return swirl_warp(img, p.swirl); }
  ImageBuffer operator()(const params::WavyColorWarp& p) const { return wavy_color_warp(img, p.wave); }
  ImageBuffer operator()(const params::BackgroundBlurComposition& p) const {
    return background_blur_composition(img, p.width_factor, p.height_factor, p.blur_sigma);
  }
  ImageBuffer operator()(const params::HighContrastBorder& p) const {
    RngStream r = rng();
    return high_contrast_border(img, p.contrast, p.border, r);
  }
  ImageBuffer operator()(const params::PerspectiveComposition& p) const {
    return perspective_composition(img, pick(assets().scenes, p.scene, "scene"));
  }
  ImageBuffer operator()(const params::PhotoComposition& p) const {
    const auto [sh, sw] = shrunk_size(img.height(), img.width(), p.shrink);
    auto place = [](double frac, int room) {
      return std::clamp(static_cast<int>(std::floor(frac * (room + 1))), 0, room);
    };
    return photo_composition(img, pick(assets().photos, p.photo, "photo"), p.shrink,
                             place(p.position_x, img.width() - sw), place(p.position_y, img.height() - sh));
  }
  ImageBuffer operator()(const params::ColorPatternOverlay& p) const {
    const AssetPack& a = assets();
    return color_pattern_overlay(img, pick(a.patterns, p.pattern, "pattern"), pick(a.colors, p.color, "color").rgb,
                                 p.alpha);
  }
  ImageBuffer operator()(const params::IconOverlay& p) const {
    return icon_overlay(img, pick(assets().icons, p.icon, "icon"), p.count, p.alpha);
  }
  ImageBuffer operator()(const params::ImageOverlay& p) const {
    return image_overlay(img, pick(assets().photos, p.photo, "photo"), p.alpha);
  }
  ImageBuffer operator()(const params::Interleave& p) const {
    return interleave(img, pick(assets().photos, p.photo, "photo"), p.stripes, p.alpha);
  }
  ImageBuffer operator()(const params::TextOverlay& p) const {
    const AssetPack& a = assets();
    return text_overlay(img, a.font, pick(a.texts, p.text, "text"), pick(a.colors, p.color, "color").rgb, p.size,
                        p.alpha);
  }
  ImageBuffer operator()(const params::AdversarialPatches& p) const {
    return adversarial_patches(img, pick(assets().patches, p.patch, "patch"), p.shrink, p.corners);
  }
  ImageBuffer operator()(const params::StyleTransfer& p) const {
    return style_transfer(img, sampled.seed.image_id, p.style, p.resize_factor, backend,
                          pack ? pack->styles : std::vector<std::filesystem::path>{});
  }
  ImageBuffer operator()(const params::Texturize& p) const {
    return texturize(img, sampled.seed.image_id, p.texture, p.resize_factor, backend,
                     pack ? pack->textures : std::vector<std::filesystem::path>{});
  }
};

}  // namespace

ImageBuffer obfuscate_image(const ImageBuffer& img, const SampledParams& params, const AssetPack* pack,
                            const StylizationBackend& backend) {
  if (img.height() != kBenchmarkSide || img.width() != kBenchmarkSide) {
    fail(ErrorCode::DimensionMismatch, "obfuscate_image: input must be 224x224, got " + std::to_string(img.height()) +
                                           "x" + std::to_string(img.width()));
  }
  ImageBuffer out = std::visit(Dispatch{img, params, pack, backend}, typed_params(params));
  if (!out.same_shape(img)) {
    fail(ErrorCode::DimensionMismatch, std::string(name_of(params.obfuscation)) + " changed the image size");
  }
  return out;
}

}  // namespace imgobf
