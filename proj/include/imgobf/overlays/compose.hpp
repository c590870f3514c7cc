#pragma once

#include <string_view>
#include <vector>

#include "imgobf/core/image.hpp"
#include "imgobf/core/rng.hpp"
#include "imgobf/overlays/assets.hpp"
#include "imgobf/overlays/font.hpp"
#include "imgobf/transforms/pixel.hpp"

namespace imgobf {

RgbaImage resize_rgba(const RgbaImage& img, int height, int width);

/// Copies `top` onto `base` with its top-left corner at (x0, y0); parts that
/// fall outside `base` are dropped.
void paste(ImageBuffer& base, const ImageBuffer& top, int x0, int y0);
void paste(ImageBuffer& base, const RgbaImage& top, int x0, int y0, double opacity = 1.0);

/// The image shrunk to (wf*W, hf*H) and centered over a blurred copy of itself.
ImageBuffer background_blur_composition(const ImageBuffer& img, double width_factor, double height_factor,
                                        double blur_sigma);

/// Contrast-reduced image resized into the center, surrounded by a border of
/// i.i.d. uniform noise drawn row-major, three channels per pixel.
ImageBuffer high_contrast_border(const ImageBuffer& img, double contrast, int border, RngStream& rng);

/// Size of the shrunk image pasted by photo_composition.
std::pair<int, int> shrunk_size(int height, int width, double shrink);

/// `photo` (resized to the image size) with the shrunk image pasted opaquely
/// at (x, y). Throws InvalidArgument when the paste leaves the frame.
ImageBuffer photo_composition(const ImageBuffer& img, const ImageBuffer& photo, double shrink, int x, int y);

/// Warps the image onto the scene quad; occluded pixels keep the photo.
ImageBuffer perspective_composition(const ImageBuffer& img, const SceneAsset& scene);

/// Grayscale image with pattern-on pixels blended toward `color`.
ImageBuffer color_pattern_overlay(const ImageBuffer& img, const Mask& pattern, Rgb color, double alpha);

/// Cell origins floor(i * side / count) for i in [0, count].
std::vector<int> grid_origins(int side, int count);

ImageBuffer icon_overlay(const ImageBuffer& img, const RgbaImage& icon, int count, double alpha);

ImageBuffer image_overlay(const ImageBuffer& img, const ImageBuffer& photo, double alpha);

/// Odd stripes are blended toward the photo; stripe indexing matches invert_lines.
ImageBuffer interleave(const ImageBuffer& img, const ImageBuffer& photo, const StripeSpec& stripes, double alpha);

/// Coverage mask of the repeated text: rows of height `size` stacked without
/// gaps, every odd row shifted left by half the text width.
Mask text_coverage(const GlyphAtlas& atlas, std::string_view text, int size, int height, int width);

ImageBuffer text_overlay(const ImageBuffer& img, const GlyphAtlas& atlas, std::string_view text, Rgb color,
                         int size, double alpha);

enum Corner : unsigned { kTopLeft = 1u, kTopRight = 2u, kBottomLeft = 4u, kBottomRight = 8u };

/// Image shrunk onto a black canvas, then the patch alpha-pasted at every
/// corner whose bit is set in `corners`.
ImageBuffer adversarial_patches(const ImageBuffer& img, const RgbaImage& patch, double shrink, unsigned corners);

}  // namespace imgobf
