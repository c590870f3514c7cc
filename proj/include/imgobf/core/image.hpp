#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace imgobf {

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  double operator[](int c) const { return c == 0 ? r : (c == 1 ? g : b); }
  double& operator[](int c) { return c == 0 ? r : (c == 1 ? g : b); }

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kBlack{0.0, 0.0, 0.0};
inline constexpr Rgb kWhite{1.0, 1.0, 1.0};

/// Row-major H x W x 3 raster of unit-interval doubles.
///
/// Operations that can leave the unit interval clamp on write; values handed
/// in from outside (files, bindings) are validated by from_values().
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int height, int width, Rgb fill = kBlack);

  /// Takes ownership of `values` (height*width*3 entries). Throws on a size
  /// mismatch or any value outside [0,1]; the message names the first
  /// offending flat index.
  static ImageBuffer from_values(int height, int width, std::vector<double> values);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  bool empty() const noexcept { return data_.empty(); }
  bool same_shape(const ImageBuffer& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  double at(int y, int x, int c) const { return data_[index(y, x, c)]; }
  double& at(int y, int x, int c) { return data_[index(y, x, c)]; }

  Rgb pixel(int y, int x) const {
    const std::size_t i = index(y, x, 0);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set_pixel(int y, int x, Rgb v) {
    const std::size_t i = index(y, x, 0);
    data_[i] = v.r;
    data_[i + 1] = v.g;
    data_[i + 2] = v.b;
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool in_unit_range() const noexcept;

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t index(int y, int x, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 3 + static_cast<std::size_t>(c);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

/// Boolean raster, same indexing as ImageBuffer.
class Mask {
 public:
  Mask() = default;
  Mask(int height, int width, bool fill = false)
      : height_(height), width_(width),
        bits_(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill ? 1 : 0) {}

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  bool at(int y, int x) const { return bits_[offset(y, x)] != 0; }
  void set(int y, int x, bool v) { bits_[offset(y, x)] = v ? 1 : 0; }
  std::size_t count() const noexcept;

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  std::size_t offset(int y, int x) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Straight (non-premultiplied) RGBA raster used for icons and patches.
class RgbaImage {
 public:
  RgbaImage() = default;
  RgbaImage(ImageBuffer rgb, std::vector<double> alpha);

  int height() const noexcept { return rgb_.height(); }
  int width() const noexcept { return rgb_.width(); }
  const ImageBuffer& rgb() const noexcept { return rgb_; }
  double alpha(int y, int x) const {
    return alpha_[static_cast<std::size_t>(y) * static_cast<std::size_t>(rgb_.width()) +
                  static_cast<std::size_t>(x)];
  }
  std::span<const double> alpha_values() const noexcept { return alpha_; }

 private:
  ImageBuffer rgb_;
  std::vector<double> alpha_;
};

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace imgobf
