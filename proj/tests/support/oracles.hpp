#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "imgobf/core/image.hpp"

namespace oracles {

/// Scalar bilinear sample with pixel centers at integer coordinates; taps
/// outside the raster read as `fill`.
inline imgobf::Rgb bilinear(const imgobf::ImageBuffer& img, double x, double y, imgobf::Rgb fill = imgobf::kBlack) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  auto tap = [&](int yy, int xx, int c) {
    if (yy < 0 || xx < 0 || yy >= img.height() || xx >= img.width()) return fill[c];
    return img.at(yy, xx, c);
  };
  imgobf::Rgb out;
  for (int c = 0; c < 3; ++c) {
    out[c] = (1 - fy) * ((1 - fx) * tap(y0, x0, c) + fx * tap(y0, x0 + 1, c)) +
             fy * ((1 - fx) * tap(y0 + 1, x0, c) + fx * tap(y0 + 1, x0 + 1, c));
  }
  return out;
}

/// Bilinear resize sample at output (y, x) with half-pixel centers and
/// edge-clamped source coordinates.
inline imgobf::Rgb resized_pixel(const imgobf::ImageBuffer& img, int out_h, int out_w, int y, int x) {
  const double sx = std::clamp((x + 0.5) * img.width() / out_w - 0.5, 0.0, img.width() - 1.0);
  const double sy = std::clamp((y + 0.5) * img.height() / out_h - 0.5, 0.0, img.height() - 1.0);
  return bilinear(img, sx, sy);
}

/// Dense 2-D Gaussian convolution over the (2r+1)^2 window, r = ceil(3*sigma),
/// with edge-clamped taps.
inline imgobf::ImageBuffer dense_gaussian(const imgobf::ImageBuffer& img, double sigma) {
  const int r = static_cast<int>(std::ceil(3 * sigma));
  std::vector<double> w;
  double total = 0.0;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      w.push_back(std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)));
      total += w.back();
    }
  }
  imgobf::ImageBuffer out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        std::size_t i = 0;
        for (int dy = -r; dy <= r; ++dy) {
          for (int dx = -r; dx <= r; ++dx, ++i) {
            acc += w[i] * img.at(std::clamp(y + dy, 0, img.height() - 1), std::clamp(x + dx, 0, img.width() - 1), c);
          }
        }
        out.at(y, x, c) = acc / total;
      }
    }
  }
  return out;
}

}  // namespace oracles
