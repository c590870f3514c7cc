#include "imgobf/core/image.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "imgobf/core/error.hpp"

namespace imgobf {

ImageBuffer::ImageBuffer(int height, int width, Rgb fill) : height_(height), width_(width) {
  require(height > 0 && width > 0, "image dimensions must be positive");
  data_.resize(static_cast<std::size_t>(height) * static_cast<std::size_t>(width) * 3);
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

ImageBuffer ImageBuffer::from_values(int height, int width, std::vector<double> values) {
  require(height > 0 && width > 0, "image dimensions must be positive");
  const std::size_t expected =
      static_cast<std::size_t>(height) * static_cast<std::size_t>(width) * 3;
  if (values.size() != expected) {
    fail(ErrorCode::DimensionMismatch, "expected " + std::to_string(expected) +
                                           " channel values, got " + std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      const std::size_t px = i / 3;
      fail(ErrorCode::InvalidArgument,
           "channel value " + std::to_string(v) + " outside [0,1] at index (" +
               std::to_string(px / static_cast<std::size_t>(width)) + ", " +
               std::to_string(px % static_cast<std::size_t>(width)) + ", " + std::to_string(i % 3) + ")");
    }
  }
  ImageBuffer img;
  img.height_ = height;
  img.width_ = width;
  img.data_ = std::move(values);
  return img;
}

bool ImageBuffer::in_unit_range() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}

std::size_t Mask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

RgbaImage::RgbaImage(ImageBuffer rgb, std::vector<double> alpha)
    : rgb_(std::move(rgb)), alpha_(std::move(alpha)) {
  if (alpha_.size() != static_cast<std::size_t>(rgb_.height()) * static_cast<std::size_t>(rgb_.width())) {
    fail(ErrorCode::DimensionMismatch, "alpha plane does not match rgb dimensions");
  }
}

}  // namespace imgobf
