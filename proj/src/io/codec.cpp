#include "imgobf/io/codec.hpp"

#include <csetjmp>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include <jpeglib.h>
#include <png.h>

#include "imgobf/core/error.hpp"
#include "imgobf/io/files.hpp"

namespace imgobf::io {

namespace {

struct PngReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
};

void png_read_callback(png_structp png, png_bytep out, png_size_t len) {
  auto* cur = static_cast<PngReadCursor*>(png_get_io_ptr(png));
  if (cur->pos + len > cur->bytes.size()) png_error(png, "truncated PNG stream");
  std::memcpy(out, cur->bytes.data() + cur->pos, len);
  cur->pos += len;
}

void png_write_callback(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

void png_flush_callback(png_structp) {}

struct PngErrorSink {
  char message[256];
};

void png_error_callback(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<PngErrorSink*>(png_get_error_ptr(png));
  std::snprintf(sink->message, sizeof(sink->message), "%s", msg);
  png_longjmp(png, 1);
}

void png_warning_callback(png_structp, png_const_charp) {}

// libpng reports errors by longjmp; nothing with a destructor lives in these
// frames across the setjmp.
bool decode_png_into(std::span<const std::uint8_t> bytes, Raster8& r, PngErrorSink& sink) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, png_error_callback,
                                           png_warning_callback);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  PngReadCursor cursor{bytes, 0};
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, &cursor, png_read_callback);
  png_read_info(png, info);
  const auto bit_depth = png_get_bit_depth(png, info);
  const auto color_type = png_get_color_type(png, info);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
  if (png_set_interlace_handling(png) != 1) png_error(png, "interlaced PNG not supported");
  png_read_update_info(png, info);

  r.width = static_cast<int>(png_get_image_width(png, info));
  r.height = static_cast<int>(png_get_image_height(png, info));
  r.channels = png_get_channels(png, info);
  if (r.channels == 2) png_error(png, "unsupported channel layout");
  const std::size_t stride = static_cast<std::size_t>(r.width) * static_cast<std::size_t>(r.channels);
  r.data.resize(stride * static_cast<std::size_t>(r.height));
  for (int y = 0; y < r.height; ++y) png_read_row(png, r.data.data() + stride * static_cast<std::size_t>(y), nullptr);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

bool encode_png_into(const Raster8& raster, int color_type, std::vector<std::uint8_t>& out, PngErrorSink& sink) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, png_error_callback,
                                            png_warning_callback);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, &out, png_write_callback, png_flush_callback);
  png_set_compression_level(png, 6);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_ALL_FILTERS);
  png_set_IHDR(png, info, static_cast<png_uint_32>(raster.width), static_cast<png_uint_32>(raster.height), 8,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_BASE, PNG_FILTER_TYPE_BASE);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(raster.width) * static_cast<std::size_t>(raster.channels);
  for (int y = 0; y < raster.height; ++y) {
    png_write_row(png, raster.data.data() + stride * static_cast<std::size_t>(y));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// No C++ objects with destructors live across the setjmp in this function.
bool decode_jpeg_into(std::span<const std::uint8_t> bytes, Raster8& r, char* message) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    std::strncpy(message, err.message, JMSG_LENGTH_MAX - 1);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  r.width = static_cast<int>(cinfo.output_width);
  r.height = static_cast<int>(cinfo.output_height);
  r.channels = 3;
  r.data.resize(static_cast<std::size_t>(r.width) * static_cast<std::size_t>(r.height) * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = r.data.data() + static_cast<std::size_t>(cinfo.output_scanline) * static_cast<std::size_t>(r.width) * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

}  // namespace

std::uint8_t quantize(double v) noexcept {
  const double c = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  return static_cast<std::uint8_t>(std::floor(c * 255.0 + 0.5));
}

Raster8 decode_image(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSig, 8) == 0) {
    Raster8 r;
    PngErrorSink sink{};
    if (!decode_png_into(bytes, r, sink)) fail(ErrorCode::Format, std::string("PNG: ") + sink.message);
    return r;
  }
  if (bytes.size() >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8 && bytes[2] == 0xff) {
    Raster8 r;
    char message[JMSG_LENGTH_MAX] = {};
    if (!decode_jpeg_into(bytes, r, message)) fail(ErrorCode::Format, std::string("JPEG: ") + message);
    return r;
  }
  fail(ErrorCode::Format, "unrecognized image format (expected PNG or JPEG)");
}

std::vector<std::uint8_t> encode_png(const Raster8& raster) {
  int color_type;
  switch (raster.channels) {
    case 1: color_type = PNG_COLOR_TYPE_GRAY; break;
    case 3: color_type = PNG_COLOR_TYPE_RGB; break;
    case 4: color_type = PNG_COLOR_TYPE_RGBA; break;
    default: fail(ErrorCode::InvalidArgument, "PNG: unsupported channel count");
  }
  const std::size_t expected = static_cast<std::size_t>(raster.width) * static_cast<std::size_t>(raster.height) *
                               static_cast<std::size_t>(raster.channels);
  if (raster.width <= 0 || raster.height <= 0 || raster.data.size() != expected) {
    fail(ErrorCode::InvalidArgument, "PNG: raster size mismatch");
  }
  std::vector<std::uint8_t> out;
  PngErrorSink sink{};
  if (!encode_png_into(raster, color_type, out, sink)) fail(ErrorCode::Io, std::string("PNG: ") + sink.message);
  return out;
}

ImageBuffer to_image(const Raster8& r) {
  ImageBuffer img(r.height, r.width);
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(r.width) +
                             static_cast<std::size_t>(x)) * static_cast<std::size_t>(r.channels);
      if (r.channels == 1) {
        const double v = r.data[i] / 255.0;
        img.set_pixel(y, x, {v, v, v});
      } else {
        img.set_pixel(y, x, {r.data[i] / 255.0, r.data[i + 1] / 255.0, r.data[i + 2] / 255.0});
      }
    }
  }
  return img;
}

Raster8 to_raster(const ImageBuffer& img) {
  Raster8 r{img.height(), img.width(), 3, {}};
  r.data.reserve(img.values().size());
  for (double v : img.values()) r.data.push_back(quantize(v));
  return r;
}

ImageBuffer read_image(const std::filesystem::path& path) { return to_image(decode_image(read_bytes(path))); }

RgbaImage read_rgba(const std::filesystem::path& path) {
  const Raster8 r = decode_image(read_bytes(path));
  std::vector<double> alpha(static_cast<std::size_t>(r.width) * static_cast<std::size_t>(r.height), 1.0);
  if (r.channels == 4) {
    for (std::size_t p = 0; p < alpha.size(); ++p) alpha[p] = r.data[p * 4 + 3] / 255.0;
  }
  return RgbaImage(to_image(r), std::move(alpha));
}

Mask read_mask(const std::filesystem::path& path) {
  const Raster8 r = decode_image(read_bytes(path));
  Mask m(r.height, r.width);
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(r.width) +
                             static_cast<std::size_t>(x)) * static_cast<std::size_t>(r.channels);
      m.set(y, x, r.data[i] > 127);
    }
  }
  return m;
}

std::vector<std::uint8_t> write_png(const std::filesystem::path& path, const Raster8& raster) {
  auto bytes = encode_png(raster);
  write_atomic(path, bytes);
  return bytes;
}

std::vector<std::uint8_t> write_png(const std::filesystem::path& path, const ImageBuffer& img) {
  return write_png(path, to_raster(img));
}

}  // namespace imgobf::io
