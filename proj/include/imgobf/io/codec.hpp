#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "imgobf/core/image.hpp"

namespace imgobf::io {

/// 8-bit interleaved raster as it exists on disk (1, 3 or 4 channels).
struct Raster8 {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;
};

/// floor(v * 255 + 0.5) on the clamped value.
std::uint8_t quantize(double v) noexcept;

/// PNG or JPEG, detected from the signature. Throws ErrorCode::Format.
Raster8 decode_image(std::span<const std::uint8_t> bytes);

/// 8-bit PNG with no ancillary chunks. Output bytes depend only on the raster.
std::vector<std::uint8_t> encode_png(const Raster8& raster);

ImageBuffer to_image(const Raster8& raster);
Raster8 to_raster(const ImageBuffer& img);

ImageBuffer read_image(const std::filesystem::path& path);
RgbaImage read_rgba(const std::filesystem::path& path);
/// Grayscale or color raster; a pixel is set when its first channel is > 127.
Mask read_mask(const std::filesystem::path& path);

/// Encodes and writes atomically; returns the written bytes.
std::vector<std::uint8_t> write_png(const std::filesystem::path& path, const ImageBuffer& img);
std::vector<std::uint8_t> write_png(const std::filesystem::path& path, const Raster8& raster);

}  // namespace imgobf::io
