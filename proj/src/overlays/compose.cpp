#include "imgobf/overlays/compose.hpp"

#include <algorithm>
#include <cmath>

#include "imgobf/core/color.hpp"
#include "imgobf/core/error.hpp"
#include "imgobf/core/resample.hpp"
#include "imgobf/overlays/blur.hpp"

namespace imgobf {

namespace {

void check_alpha(double alpha, const char* op) {
  require(alpha >= 0.0 && alpha <= 1.0, std::string(op) + ": alpha must lie in [0,1]");
}

Rgb mix(Rgb a, Rgb b, double t) {
  return {clamp01((1.0 - t) * a.r + t * b.r), clamp01((1.0 - t) * a.g + t * b.g), clamp01((1.0 - t) * a.b + t * b.b)};
}

ImageBuffer fit_to(const ImageBuffer& photo, const ImageBuffer& img) {
  return resize_bilinear(photo, img.height(), img.width());
}

}  // namespace

RgbaImage resize_rgba(const RgbaImage& img, int height, int width) {
  if (img.height() == height && img.width() == width) return img;
  std::vector<double> alpha_rgb;
  alpha_rgb.reserve(img.alpha_values().size() * 3);
  for (double a : img.alpha_values()) alpha_rgb.insert(alpha_rgb.end(), {a, a, a});
  const ImageBuffer alpha_img = ImageBuffer::from_values(img.height(), img.width(), std::move(alpha_rgb));
  const ImageBuffer scaled_alpha = resize_bilinear(alpha_img, height, width);
  std::vector<double> alpha;
  alpha.reserve(static_cast<std::size_t>(height) * static_cast<std::size_t>(width));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) alpha.push_back(scaled_alpha.at(y, x, 0));
  }
  return RgbaImage(resize_bilinear(img.rgb(), height, width), std::move(alpha));
}

void paste(ImageBuffer& base, const ImageBuffer& top, int x0, int y0) {
  for (int y = std::max(0, -y0); y < top.height() && y0 + y < base.height(); ++y) {
    for (int x = std::max(0, -x0); x < top.width() && x0 + x < base.width(); ++x) {
      base.set_pixel(y0 + y, x0 + x, top.pixel(y, x));
    }
  }
}

void paste(ImageBuffer& base, const RgbaImage& top, int x0, int y0, double opacity) {
  for (int y = std::max(0, -y0); y < top.height() && y0 + y < base.height(); ++y) {
    for (int x = std::max(0, -x0); x < top.width() && x0 + x < base.width(); ++x) {
      const double a = opacity * top.alpha(y, x);
      if (a <= 0.0) continue;
      const Rgb src = top.rgb().pixel(y, x);
      base.set_pixel(y0 + y, x0 + x, a >= 1.0 ? src : mix(base.pixel(y0 + y, x0 + x), src, a));
    }
  }
}

ImageBuffer background_blur_composition(const ImageBuffer& img, double width_factor, double height_factor,
                                        double blur_sigma) {
  require(width_factor > 0.0 && width_factor <= 1.0 && height_factor > 0.0 && height_factor <= 1.0,
          "background_blur_composition: factors must lie in (0,1]");
  const int fw = std::max(1, static_cast<int>(std::lround(width_factor * img.width())));
  const int fh = std::max(1, static_cast<int>(std::lround(height_factor * img.height())));
  if (fw == img.width() && fh == img.height()) return img;
  ImageBuffer out = gaussian_blur(img, blur_sigma);
  paste(out, resize_bilinear(img, fh, fw), (img.width() - fw) / 2, (img.height() - fh) / 2);
  return out;
}

ImageBuffer high_contrast_border(const ImageBuffer& img, double contrast, int border, RngStream& rng) {
  require(contrast >= 0.0, "high_contrast_border: contrast must be non-negative");
  require(border >= 0 && 2 * border < std::min(img.width(), img.height()),
          "high_contrast_border: border must satisfy 0 <= 2*border < side");
  const ImageBuffer reduced = adjust_contrast(img, contrast);
  if (border == 0) return reduced;
  ImageBuffer out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    const bool edge_row = y < border || y >= img.height() - border;
    for (int x = 0; x < img.width(); ++x) {
      if (!edge_row && x >= border && x < img.width() - border) continue;
      const double r = rng.uniform();
      const double g = rng.uniform();
      const double b = rng.uniform();
      out.set_pixel(y, x, {r, g, b});
    }
  }
  paste(out, resize_bilinear(reduced, img.height() - 2 * border, img.width() - 2 * border), border, border);
  return out;
}

std::pair<int, int> shrunk_size(int height, int width, double shrink) {
  return {std::max(1, static_cast<int>(std::lround(shrink * height))),
          std::max(1, static_cast<int>(std::lround(shrink * width)))};
}

ImageBuffer photo_composition(const ImageBuffer& img, const ImageBuffer& photo, double shrink, int x, int y) {
  require(shrink > 0.0 && shrink <= 1.0, "photo_composition: shrink must lie in (0,1]");
  const auto [sh, sw] = shrunk_size(img.height(), img.width(), shrink);
  if (x < 0 || y < 0 || x + sw > img.width() || y + sh > img.height()) {
    fail(ErrorCode::InvalidArgument, "photo_composition: placement out of bounds");
  }
  ImageBuffer out = fit_to(photo, img);
  paste(out, resize_bilinear(img, sh, sw), x, y);
  return out;
}

ImageBuffer perspective_composition(const ImageBuffer& img, const SceneAsset& scene) {
  ImageBuffer photo = fit_to(scene.photo, img);
  const double sx = static_cast<double>(img.width()) / scene.photo.width();
  const double sy = static_cast<double>(img.height()) / scene.photo.height();
  std::array<Point2, 4> quad = scene.quad;
  if (sx != 1.0 || sy != 1.0) {
    for (auto& p : quad) p = {(p.x + 0.5) * sx - 0.5, (p.y + 0.5) * sy - 0.5};
  }
  auto occluded = [&](int y, int x) {
    if (scene.occlusion.height() == 0) return false;
    const int my = std::min(scene.occlusion.height() - 1, static_cast<int>(y / sy));
    const int mx = std::min(scene.occlusion.width() - 1, static_cast<int>(x / sx));
    return scene.occlusion.at(my, mx);
  };

  const Homography inv = solve_homography({image_corners(img.width(), img.height()), quad}).inverse();
  ImageBuffer out = photo;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (occluded(y, x)) continue;
      double w = 0.0;
      const Point2 s = inv.apply({static_cast<double>(x), static_cast<double>(y)}, &w);
      if (!(w > 0.0)) continue;
      if (s.x < -0.5 || s.y < -0.5 || s.x >= img.width() - 0.5 || s.y >= img.height() - 0.5) continue;
      out.set_pixel(y, x, sample_bilinear_clamped(img, s.x, s.y));
    }
  }
  return out;
}

ImageBuffer color_pattern_overlay(const ImageBuffer& img, const Mask& pattern, Rgb color, double alpha) {
  check_alpha(alpha, "color_pattern_overlay");
  require(pattern.height() > 0 && pattern.width() > 0, "color_pattern_overlay: empty pattern");
  ImageBuffer out = to_grayscale(img);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      if (!pattern.at(y % pattern.height(), x % pattern.width())) continue;
      out.set_pixel(y, x, alpha == 1.0 ? color : mix(out.pixel(y, x), color, alpha));
    }
  }
  return out;
}

std::vector<int> grid_origins(int side, int count) {
  require(count >= 1 && count <= side, "grid_origins: count must lie in [1, side]");
  std::vector<int> out(static_cast<std::size_t>(count) + 1);
  for (int i = 0; i <= count; ++i) out[static_cast<std::size_t>(i)] = static_cast<int>(static_cast<long>(i) * side / count);
  return out;
}

ImageBuffer icon_overlay(const ImageBuffer& img, const RgbaImage& icon, int count, double alpha) {
  check_alpha(alpha, "icon_overlay");
  const auto xs = grid_origins(img.width(), count);
  const auto ys = grid_origins(img.height(), count);
  if (alpha == 0.0) return img;
  ImageBuffer out = img;
  for (int j = 0; j < count; ++j) {
    for (int i = 0; i < count; ++i) {
      const int cw = xs[static_cast<std::size_t>(i) + 1] - xs[static_cast<std::size_t>(i)];
      const int ch = ys[static_cast<std::size_t>(j) + 1] - ys[static_cast<std::size_t>(j)];
      paste(out, resize_rgba(icon, ch, cw), xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(j)], alpha);
    }
  }
  return out;
}

ImageBuffer image_overlay(const ImageBuffer& img, const ImageBuffer& photo, double alpha) {
  check_alpha(alpha, "image_overlay");
  if (alpha == 0.0) return img;
  return alpha_blend(img, fit_to(photo, img), alpha);
}

ImageBuffer interleave(const ImageBuffer& img, const ImageBuffer& photo, const StripeSpec& stripes, double alpha) {
  check_alpha(alpha, "interleave");
  require(stripes.width >= 1, "interleave: stripe width must be >= 1");
  if (alpha == 0.0) return img;
  const ImageBuffer fitted = fit_to(photo, img);
  Mask odd(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) odd.set(y, x, stripe_index(stripes, y, x) % 2 == 1);
  }
  return alpha_blend(img, fitted, alpha, odd);
}

Mask text_coverage(const GlyphAtlas& atlas, std::string_view text, int size, int height, int width) {
  require(size >= 6, "text_overlay: size must be >= 6 pixels");
  std::string padded(text);
  padded.push_back(' ');
  const Mask line = render_text(atlas, padded, size);
  const int tw = line.width();
  Mask out(height, width);
  for (int y = 0; y < height; ++y) {
    const int row = y / size;
    const int ly = y % size;
    const int offset = row % 2 == 1 ? tw / 2 : 0;
    for (int x = 0; x < width; ++x) {
      if (line.at(ly, (x + offset) % tw)) out.set(y, x, true);
    }
  }
  return out;
}

ImageBuffer text_overlay(const ImageBuffer& img, const GlyphAtlas& atlas, std::string_view text, Rgb color,
                         int size, double alpha) {
  check_alpha(alpha, "text_overlay");
  if (alpha == 0.0) return img;
  const Mask cover = text_coverage(atlas, text, size, img.height(), img.width());
  ImageBuffer out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (cover.at(y, x)) out.set_pixel(y, x, alpha == 1.0 ? color : mix(img.pixel(y, x), color, alpha));
    }
  }
  return out;
}

ImageBuffer adversarial_patches(const ImageBuffer& img, const RgbaImage& patch, double shrink, unsigned corners) {
  require(shrink > 0.0 && shrink <= 1.0, "adversarial_patches: shrink must lie in (0,1]");
  require(corners <= 15u, "adversarial_patches: corner mask must be a subset of 4 corners");
  const int pw = patch.width();
  const int ph = patch.height();
  if (corners != 0) {
    require(2 * pw <= img.width() && 2 * ph <= img.height(),
            "adversarial_patches: patch must fit in a corner quadrant");
  }
  const auto [sh, sw] = shrunk_size(img.height(), img.width(), shrink);
  ImageBuffer out(img.height(), img.width(), kBlack);
  paste(out, resize_bilinear(img, sh, sw), (img.width() - sw) / 2, (img.height() - sh) / 2);
  if (corners & kTopLeft) paste(out, patch, 0, 0);
  if (corners & kTopRight) paste(out, patch, img.width() - pw, 0);
  if (corners & kBottomLeft) paste(out, patch, 0, img.height() - ph);
  if (corners & kBottomRight) paste(out, patch, img.width() - pw, img.height() - ph);
  return out;
}

}  // namespace imgobf
