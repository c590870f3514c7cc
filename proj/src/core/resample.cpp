#include "imgobf/core/resample.hpp"

#include <algorithm>
#include <cmath>

#include "imgobf/core/error.hpp"

namespace imgobf {

Rgb sample_bilinear(const ImageBuffer& img, double x, double y, Rgb fill) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const double tx = x - fx;
  const double ty = y - fy;
  // Far outside: skip the int conversion entirely.
  if (fx < -2.0 || fy < -2.0 || fx > img.width() + 1.0 || fy > img.height() + 1.0) return fill;
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  auto tap = [&](int yy, int xx) -> Rgb {
    if (xx < 0 || yy < 0 || xx >= img.width() || yy >= img.height()) return fill;
    return img.pixel(yy, xx);
  };
  const double w00 = (1.0 - tx) * (1.0 - ty);
  const double w10 = tx * (1.0 - ty);
  const double w01 = (1.0 - tx) * ty;
  const double w11 = tx * ty;
  Rgb out;
  // Zero-weight taps are skipped so exact lattice samples never touch
  // neighbours outside the raster.
  const Rgb p00 = tap(y0, x0);
  const Rgb p10 = w10 != 0.0 ? tap(y0, x0 + 1) : Rgb{};
  const Rgb p01 = w01 != 0.0 ? tap(y0 + 1, x0) : Rgb{};
  const Rgb p11 = w11 != 0.0 ? tap(y0 + 1, x0 + 1) : Rgb{};
  for (int c = 0; c < 3; ++c) {
    out[c] = clamp01(w00 * p00[c] + w10 * p10[c] + w01 * p01[c] + w11 * p11[c]);
  }
  return out;
}

Rgb sample_bilinear_clamped(const ImageBuffer& img, double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(img.width() - 1));
  y = std::clamp(y, 0.0, static_cast<double>(img.height() - 1));
  return sample_bilinear(img, x, y, kBlack);
}

ImageBuffer resize_bilinear(const ImageBuffer& img, int height, int width) {
  require(!img.empty(), "resize: empty image");
  require(height > 0 && width > 0, "resize: target dimensions must be positive");
  if (height == img.height() && width == img.width()) return img;
  ImageBuffer out(height, width);
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double src_y = (y + 0.5) * sy - 0.5;
    for (int x = 0; x < width; ++x) {
      const double src_x = (x + 0.5) * sx - 0.5;
      out.set_pixel(y, x, sample_bilinear_clamped(img, src_x, src_y));
    }
  }
  return out;
}

ImageBuffer crop(const ImageBuffer& img, int x0, int y0, int width, int height) {
  require(x0 >= 0 && y0 >= 0 && width > 0 && height > 0 && x0 + width <= img.width() &&
              y0 + height <= img.height(),
          "crop: rectangle outside image");
  ImageBuffer out(height, width);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.set_pixel(y, x, img.pixel(y0 + y, x0 + x));
  }
  return out;
}

ImageBuffer central_crop_resize(const ImageBuffer& img, int side) {
  require(!img.empty(), "central_crop_resize: empty image");
  require(side >= 1, "central_crop_resize: side must be >= 1");
  const int s = std::min(img.width(), img.height());
  const int x0 = (img.width() - s) / 2;
  const int y0 = (img.height() - s) / 2;
  if (s == side && x0 == 0 && y0 == 0) return img;
  return resize_bilinear(crop(img, x0, y0, s, s), side, side);
}

}  // namespace imgobf
