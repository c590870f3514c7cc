#include "imgobf/overlays/font.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "imgobf/core/error.hpp"

namespace imgobf {

namespace {

constexpr int kBuiltinWidth = 5;
constexpr int kBuiltinHeight = 7;

// One byte per row, bit 4 is the leftmost column.
constexpr std::array<std::array<std::uint8_t, kBuiltinHeight>, 95> kBuiltinGlyphs{{
    {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00},  // ' '
    {0x04, 0x04, 0x04, 0x04, 0x04, 0x00, 0x04},  // '!'
    {0x0a, 0x0a, 0x00, 0x00, 0x00, 0x00, 0x00},  // '"'
    {0x0a, 0x0a, 0x1f, 0x0a, 0x1f, 0x0a, 0x0a},  // '#'
    {0x04, 0x0f, 0x14, 0x0e, 0x05, 0x1e, 0x04},  // '$'
    {0x18, 0x19, 0x02, 0x04, 0x08, 0x13, 0x03},  // '%'
    {0x0c, 0x12, 0x14, 0x08, 0x15, 0x12, 0x0d},  // '&'
    {0x04, 0x04, 0x00, 0x00, 0x00, 0x00, 0x00},  // "'"
    {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02},  // '('
    {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08},  // ')'
    {0x00, 0x04, 0x15, 0x0e, 0x15, 0x04, 0x00},  // '*'
    {0x00, 0x04, 0x04, 0x1f, 0x04, 0x04, 0x00},  // '+'
    {0x00, 0x00, 0x00, 0x00, 0x0c, 0x04, 0x08},  // ','
    {0x00, 0x00, 0x00, 0x1f, 0x00, 0x00, 0x00},  // '-'
    {0x00, 0x00, 0x00, 0x00, 0x00, 0x0c, 0x0c},  // '.'
    {0x00, 0x01, 0x02, 0x04, 0x08, 0x10, 0x00},  // '/'
    {0x0e, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0e},  // '0'
    {0x04, 0x0c, 0x04, 0x04, 0x04, 0x04, 0x0e},  // '1'
    {0x0e, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1f},  // '2'
    {0x1f, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0e},  // '3'
    {0x02, 0x06, 0x0a, 0x12, 0x1f, 0x02, 0x02},  // '4'
    {0x1f, 0x10, 0x1e, 0x01, 0x01, 0x11, 0x0e},  // '5'
    {0x06, 0x08, 0x10, 0x1e, 0x11, 0x11, 0x0e},  // '6'
    {0x1f, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},  // '7'
    {0x0e, 0x11, 0x11, 0x0e, 0x11, 0x11, 0x0e},  // '8'
    {0x0e, 0x11, 0x11, 0x0f, 0x01, 0x02, 0x0c},  // '9'
    {0x00, 0x0c, 0x0c, 0x00, 0x0c, 0x0c, 0x00},  // ':'
    {0x00, 0x0c, 0x0c, 0x00, 0x0c, 0x04, 0x08},  // ';'
    {0x02, 0x04, 0x08, 0x10, 0x08, 0x04, 0x02},  // '<'
    {0x00, 0x00, 0x1f, 0x00, 0x1f, 0x00, 0x00},  // '='
    {0x08, 0x04, 0x02, 0x01, 0x02, 0x04, 0x08},  // '>'
    {0x0e, 0x11, 0x01, 0x02, 0x04, 0x00, 0x04},  // '?'
    {0x0e, 0x11, 0x01, 0x0d, 0x15, 0x15, 0x0e},  // '@'
    {0x0e, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x11},  // 'A'
    {0x1e, 0x11, 0x11, 0x1e, 0x11, 0x11, 0x1e},  // 'B'
    {0x0e, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0e},  // 'C'
    {0x1c, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1c},  // 'D'
    {0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x1f},  // 'E'
    {0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x10},  // 'F'
    {0x0e, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0f},  // 'G'
    {0x11, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x11},  // 'H'
    {0x0e, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0e},  // 'I'
    {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0c},  // 'J'
    {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11},  // 'K'
    {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1f},  // 'L'
    {0x11, 0x1b, 0x15, 0x15, 0x11, 0x11, 0x11},  // 'M'
    {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11},  // 'N'
    {0x0e, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0e},  // 'O'
    {0x1e, 0x11, 0x11, 0x1e, 0x10, 0x10, 0x10},  // 'P'
    {0x0e, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0d},  // 'Q'
    {0x1e, 0x11, 0x11, 0x1e, 0x14, 0x12, 0x11},  // 'R'
    {0x0f, 0x10, 0x10, 0x0e, 0x01, 0x01, 0x1e},  // 'S'
    {0x1f, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04},  // 'T'
    {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0e},  // 'U'
    {0x11, 0x11, 0x11, 0x11, 0x11, 0x0a, 0x04},  // 'V'
    {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0a},  // 'W'
    {0x11, 0x11, 0x0a, 0x04, 0x0a, 0x11, 0x11},  // 'X'
    {0x11, 0x11, 0x0a, 0x04, 0x04, 0x04, 0x04},  // 'Y'
    {0x1f, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1f},  // 'Z'
    {0x0e, 0x08, 0x08, 0x08, 0x08, 0x08, 0x0e},  // '['
    {0x00, 0x10, 0x08, 0x04, 0x02, 0x01, 0x00},  // '\\'
    {0x0e, 0x02, 0x02, 0x02, 0x02, 0x02, 0x0e},  // ']'
    {0x04, 0x0a, 0x11, 0x00, 0x00, 0x00, 0x00},  // '^'
    {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1f},  // '_'
    {0x08, 0x04, 0x00, 0x00, 0x00, 0x00, 0x00},  // '`'
    {0x00, 0x00, 0x0e, 0x01, 0x0f, 0x11, 0x0f},  // 'a'
    {0x10, 0x10, 0x16, 0x19, 0x11, 0x11, 0x1e},  // 'b'
    {0x00, 0x00, 0x0e, 0x10, 0x10, 0x11, 0x0e},  // 'c'
    {0x01, 0x01, 0x0d, 0x13, 0x11, 0x11, 0x0f},  // 'd'
    {0x00, 0x00, 0x0e, 0x11, 0x1f, 0x10, 0x0e},  // 'e'
    {0x06, 0x09, 0x08, 0x1c, 0x08, 0x08, 0x08},  // 'f'
    {0x00, 0x0f, 0x11, 0x11, 0x0f, 0x01, 0x0e},  // 'g'
    {0x10, 0x10, 0x16, 0x19, 0x11, 0x11, 0x11},  // 'h'
    {0x04, 0x00, 0x0c, 0x04, 0x04, 0x04, 0x0e},  // 'i'
    {0x02, 0x00, 0x06, 0x02, 0x02, 0x12, 0x0c},  // 'j'
    {0x10, 0x10, 0x12, 0x14, 0x18, 0x14, 0x12},  // 'k'
    {0x0c, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0e},  // 'l'
    {0x00, 0x00, 0x1a, 0x15, 0x15, 0x11, 0x11},  // 'm'
    {0x00, 0x00, 0x16, 0x19, 0x11, 0x11, 0x11},  // 'n'
    {0x00, 0x00, 0x0e, 0x11, 0x11, 0x11, 0x0e},  // 'o'
    {0x00, 0x00, 0x1e, 0x11, 0x1e, 0x10, 0x10},  // 'p'
    {0x00, 0x00, 0x0d, 0x13, 0x0f, 0x01, 0x01},  // 'q'
    {0x00, 0x00, 0x16, 0x19, 0x10, 0x10, 0x10},  // 'r'
    {0x00, 0x00, 0x0e, 0x10, 0x0e, 0x01, 0x1e},  // 's'
    {0x08, 0x08, 0x1c, 0x08, 0x08, 0x09, 0x06},  // 't'
    {0x00, 0x00, 0x11, 0x11, 0x11, 0x13, 0x0d},  // 'u'
    {0x00, 0x00, 0x11, 0x11, 0x11, 0x0a, 0x04},  // 'v'
    {0x00, 0x00, 0x11, 0x11, 0x15, 0x15, 0x0a},  // 'w'
    {0x00, 0x00, 0x11, 0x0a, 0x04, 0x0a, 0x11},  // 'x'
    {0x00, 0x00, 0x11, 0x11, 0x0f, 0x01, 0x0e},  // 'y'
    {0x00, 0x00, 0x1f, 0x02, 0x04, 0x08, 0x1f},  // 'z'
    {0x02, 0x04, 0x04, 0x08, 0x04, 0x04, 0x02},  // '{'
    {0x04, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04},  // '|'
    {0x08, 0x04, 0x04, 0x02, 0x04, 0x04, 0x08},  // '}'
    {0x00, 0x00, 0x08, 0x15, 0x02, 0x00, 0x00},  // '~'
}};

}  // namespace

GlyphAtlas::GlyphAtlas(int glyph_width, int glyph_height, char first_char, std::vector<Mask> glyphs)
    : glyph_width_(glyph_width), glyph_height_(glyph_height), first_char_(first_char),
      glyphs_(std::move(glyphs)), blank_(glyph_height, glyph_width) {
  require(glyph_width > 0 && glyph_height > 0, "glyph atlas: glyph size must be positive");
  for (const auto& g : glyphs_) {
    if (g.width() != glyph_width || g.height() != glyph_height) {
      fail(ErrorCode::Format, "glyph atlas: inconsistent glyph size");
    }
  }
}

GlyphAtlas GlyphAtlas::builtin() {
  std::vector<Mask> glyphs;
  glyphs.reserve(kBuiltinGlyphs.size());
  for (const auto& rows : kBuiltinGlyphs) {
    Mask m(kBuiltinHeight, kBuiltinWidth);
    for (int y = 0; y < kBuiltinHeight; ++y) {
      for (int x = 0; x < kBuiltinWidth; ++x) {
        m.set(y, x, (rows[static_cast<std::size_t>(y)] >> (kBuiltinWidth - 1 - x)) & 1);
      }
    }
    glyphs.push_back(std::move(m));
  }
  return GlyphAtlas(kBuiltinWidth, kBuiltinHeight, ' ', std::move(glyphs));
}

GlyphAtlas GlyphAtlas::from_raster(const io::Raster8& atlas, int glyph_width, int glyph_height, char first_char,
                                   int glyph_count, int columns) {
  require(columns > 0 && glyph_count > 0, "glyph atlas: bad layout");
  const int rows = (glyph_count + columns - 1) / columns;
  if (atlas.width < columns * glyph_width || atlas.height < rows * glyph_height) {
    fail(ErrorCode::Format, "glyph atlas image is smaller than its declared layout");
  }
  std::vector<Mask> glyphs;
  for (int i = 0; i < glyph_count; ++i) {
    const int ox = (i % columns) * glyph_width;
    const int oy = (i / columns) * glyph_height;
    Mask m(glyph_height, glyph_width);
    for (int y = 0; y < glyph_height; ++y) {
      for (int x = 0; x < glyph_width; ++x) {
        const std::size_t idx = (static_cast<std::size_t>(oy + y) * static_cast<std::size_t>(atlas.width) +
                                 static_cast<std::size_t>(ox + x)) * static_cast<std::size_t>(atlas.channels);
        m.set(y, x, atlas.data[idx] > 127);
      }
    }
    glyphs.push_back(std::move(m));
  }
  return GlyphAtlas(glyph_width, glyph_height, first_char, std::move(glyphs));
}

io::Raster8 GlyphAtlas::to_raster(int columns) const {
  const int rows = (glyph_count() + columns - 1) / columns;
  io::Raster8 r{rows * glyph_height_, columns * glyph_width_, 1, {}};
  r.data.assign(static_cast<std::size_t>(r.width) * static_cast<std::size_t>(r.height), 0);
  for (int i = 0; i < glyph_count(); ++i) {
    const int ox = (i % columns) * glyph_width_;
    const int oy = (i / columns) * glyph_height_;
    for (int y = 0; y < glyph_height_; ++y) {
      for (int x = 0; x < glyph_width_; ++x) {
        if (glyphs_[static_cast<std::size_t>(i)].at(y, x)) {
          r.data[static_cast<std::size_t>(oy + y) * static_cast<std::size_t>(r.width) + static_cast<std::size_t>(ox + x)] = 255;
        }
      }
    }
  }
  return r;
}

const Mask& GlyphAtlas::glyph(char c) const {
  const int i = static_cast<unsigned char>(c) - static_cast<unsigned char>(first_char_);
  if (i < 0 || i >= glyph_count()) return blank_;
  return glyphs_[static_cast<std::size_t>(i)];
}

int scaled_glyph_width(const GlyphAtlas& atlas, int size) {
  return std::max(1, static_cast<int>(std::lround(static_cast<double>(atlas.glyph_width()) * size /
                                                  atlas.glyph_height())));
}

Mask render_glyph(const GlyphAtlas& atlas, char c, int size) {
  require(size >= 1, "render_glyph: size must be positive");
  const int w = scaled_glyph_width(atlas, size);
  const Mask& g = atlas.glyph(c);
  Mask out(size, w);
  for (int y = 0; y < size; ++y) {
    const int sy = y * atlas.glyph_height() / size;
    for (int x = 0; x < w; ++x) out.set(y, x, g.at(sy, x * atlas.glyph_width() / w));
  }
  return out;
}

Mask render_text(const GlyphAtlas& atlas, std::string_view text, int size) {
  require(!text.empty(), "render_text: empty text");
  const int gw = scaled_glyph_width(atlas, size);
  const int gap = std::max(1, size / atlas.glyph_height());
  const int advance = gw + gap;
  Mask out(size, advance * static_cast<int>(text.size()));
  for (std::size_t i = 0; i < text.size(); ++i) {
    const Mask g = render_glyph(atlas, text[i], size);
    const int ox = static_cast<int>(i) * advance;
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < gw; ++x) {
        if (g.at(y, x)) out.set(y, ox + x, true);
      }
    }
  }
  return out;
}

}  // namespace imgobf
