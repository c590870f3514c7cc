#include "imgobf/core/color.hpp"

#include <algorithm>
#include <cmath>

#include "imgobf/core/error.hpp"

namespace imgobf {

Hsv rgb_to_hsv(Rgb c) {
  const double mx = std::max({c.r, c.g, c.b});
  const double mn = std::min({c.r, c.g, c.b});
  const double delta = mx - mn;
  Hsv out;
  out.v = mx;
  out.s = mx > 0.0 ? delta / mx : 0.0;
  if (delta <= 0.0) return out;
  double h;
  if (mx == c.r) {
    h = std::fmod((c.g - c.b) / delta, 6.0);
  } else if (mx == c.g) {
    h = (c.b - c.r) / delta + 2.0;
  } else {
    h = (c.r - c.g) / delta + 4.0;
  }
  h *= 60.0;
  if (h < 0.0) h += 360.0;
  out.h = h;
  return out;
}

Rgb hsv_to_rgb(Hsv c) {
  double h = std::fmod(c.h, 360.0);
  if (h < 0.0) h += 360.0;
  const double chroma = c.v * c.s;
  const double hp = h / 60.0;
  const double x = chroma * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = chroma; g = x; break;
    case 1: r = x; g = chroma; break;
    case 2: g = chroma; b = x; break;
    case 3: g = x; b = chroma; break;
    case 4: r = x; b = chroma; break;
    default: r = chroma; b = x; break;
  }
  const double m = c.v - chroma;
  return {clamp01(r + m), clamp01(g + m), clamp01(b + m)};
}

namespace {

void check_same_shape(const ImageBuffer& a, const ImageBuffer& b, const char* what) {
  if (!a.same_shape(b)) fail(ErrorCode::DimensionMismatch, std::string(what) + ": dimension mismatch");
}

}  // namespace

ImageBuffer alpha_blend(const ImageBuffer& base, const ImageBuffer& top, double alpha) {
  check_same_shape(base, top, "alpha_blend");
  require(alpha >= 0.0 && alpha <= 1.0, "alpha_blend: alpha must lie in [0,1]");
  ImageBuffer out = base;
  auto dst = out.values();
  auto src = top.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = clamp01((1.0 - alpha) * dst[i] + alpha * src[i]);
  return out;
}

ImageBuffer alpha_blend(const ImageBuffer& base, const ImageBuffer& top, double alpha,
                        const Mask& mask) {
  check_same_shape(base, top, "alpha_blend");
  if (mask.height() != base.height() || mask.width() != base.width()) {
    fail(ErrorCode::DimensionMismatch, "alpha_blend: mask dimension mismatch");
  }
  require(alpha >= 0.0 && alpha <= 1.0, "alpha_blend: alpha must lie in [0,1]");
  ImageBuffer out = base;
  for (int y = 0; y < base.height(); ++y) {
    for (int x = 0; x < base.width(); ++x) {
      if (!mask.at(y, x)) continue;
      for (int c = 0; c < 3; ++c) {
        out.at(y, x, c) = clamp01((1.0 - alpha) * base.at(y, x, c) + alpha * top.at(y, x, c));
      }
    }
  }
  return out;
}

ImageBuffer adjust_contrast(const ImageBuffer& img, double factor) {
  require(factor >= 0.0, "adjust_contrast: factor must be non-negative");
  ImageBuffer out = img;
  for (double& v : out.values()) v = contrast_value(v, factor);
  return out;
}

ImageBuffer hue_rotate(const ImageBuffer& img, double degrees) {
  if (std::fmod(degrees, 360.0) == 0.0) return img;
  ImageBuffer out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      Hsv hsv = rgb_to_hsv(img.pixel(y, x));
      hsv.h = std::fmod(hsv.h + degrees, 360.0);
      if (hsv.h < 0.0) hsv.h += 360.0;
      out.set_pixel(y, x, hsv_to_rgb(hsv));
    }
  }
  return out;
}

ImageBuffer to_grayscale(const ImageBuffer& img) {
  ImageBuffer out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const Rgb p = img.pixel(y, x);
      // Already-gray pixels pass through bit-exactly.
      const double l = (p.r == p.g && p.g == p.b) ? p.r : clamp01(luma(p));
      out.set_pixel(y, x, {l, l, l});
    }
  }
  return out;
}

}  // namespace imgobf
