#pragma once

#include <vector>

#include "imgobf/core/image.hpp"

namespace imgobf {

/// Normalized 1-D Gaussian taps for offsets -r..r, r = ceil(3*sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian with edge-clamped taps. sigma == 0 is the identity.
ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma);

}  // namespace imgobf
