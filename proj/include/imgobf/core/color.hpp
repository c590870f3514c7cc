#pragma once

#include "imgobf/core/image.hpp"

namespace imgobf {

struct Hsv {
  double h = 0.0;  // degrees in [0, 360)
  double s = 0.0;
  double v = 0.0;
};

Hsv rgb_to_hsv(Rgb c);
Rgb hsv_to_rgb(Hsv c);

/// Rec.601 luma.
inline double luma(Rgb c) { return 0.299 * c.r + 0.587 * c.g + 0.114 * c.b; }

/// out = (1-alpha)*base + alpha*top, everywhere or only where `mask` is set.
ImageBuffer alpha_blend(const ImageBuffer& base, const ImageBuffer& top, double alpha);
ImageBuffer alpha_blend(const ImageBuffer& base, const ImageBuffer& top, double alpha,
                        const Mask& mask);

/// clamp(0.5 + factor*(v - 0.5)) per channel.
ImageBuffer adjust_contrast(const ImageBuffer& img, double factor);
inline double contrast_value(double v, double factor) {
  return factor == 1.0 ? v : clamp01(0.5 + factor * (v - 0.5));
}

ImageBuffer hue_rotate(const ImageBuffer& img, double degrees);
ImageBuffer to_grayscale(const ImageBuffer& img);

}  // namespace imgobf
