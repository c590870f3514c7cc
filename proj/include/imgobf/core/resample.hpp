#pragma once

#include "imgobf/core/image.hpp"

namespace imgobf {

// Sampling coordinates put pixel (x, y) at its center: column x, row y.

/// Bilinear sample where every tap outside the raster reads as `fill`.
Rgb sample_bilinear(const ImageBuffer& img, double x, double y, Rgb fill = kBlack);

/// Bilinear sample with coordinates clamped to the raster (edge replicate).
Rgb sample_bilinear_clamped(const ImageBuffer& img, double x, double y);

/// Half-pixel-centered bilinear resize with edge clamping. Same-size input is
/// returned unchanged.
ImageBuffer resize_bilinear(const ImageBuffer& img, int height, int width);

/// Largest centered square, then bilinear resize to side x side.
ImageBuffer central_crop_resize(const ImageBuffer& img, int side);

/// Copies the rectangle [x0, x0+w) x [y0, y0+h).
ImageBuffer crop(const ImageBuffer& img, int x0, int y0, int width, int height);

}  // namespace imgobf
