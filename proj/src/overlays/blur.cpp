#include "imgobf/overlays/blur.hpp"

#include <algorithm>
#include <cmath>

#include "imgobf/core/error.hpp"

namespace imgobf {

std::vector<double> gaussian_kernel(double sigma) {
  require(sigma >= 0.0, "gaussian_kernel: sigma must be non-negative");
  if (sigma == 0.0) return {1.0};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma) {
  const auto kernel = gaussian_kernel(sigma);
  if (kernel.size() == 1) return img;
  const int radius = static_cast<int>(kernel.size() / 2);
  const int h = img.height();
  const int w = img.width();
  ImageBuffer tmp(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Rgb acc;
      for (int k = -radius; k <= radius; ++k) {
        const Rgb p = img.pixel(y, std::clamp(x + k, 0, w - 1));
        const double wgt = kernel[static_cast<std::size_t>(k + radius)];
        acc.r += wgt * p.r;
        acc.g += wgt * p.g;
        acc.b += wgt * p.b;
      }
      tmp.set_pixel(y, x, acc);
    }
  }
  ImageBuffer out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Rgb acc;
      for (int k = -radius; k <= radius; ++k) {
        const Rgb p = tmp.pixel(std::clamp(y + k, 0, h - 1), x);
        const double wgt = kernel[static_cast<std::size_t>(k + radius)];
        acc.r += wgt * p.r;
        acc.g += wgt * p.g;
        acc.b += wgt * p.b;
      }
      out.set_pixel(y, x, {clamp01(acc.r), clamp01(acc.g), clamp01(acc.b)});
    }
  }
  return out;
}

}  // namespace imgobf
