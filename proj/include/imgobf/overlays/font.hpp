#pragma once

#include <string_view>
#include <vector>

#include "imgobf/core/image.hpp"
#include "imgobf/io/codec.hpp"

namespace imgobf {

/// Fixed-cell bitmap font covering a contiguous character range.
class GlyphAtlas {
 public:
  GlyphAtlas() = default;
  GlyphAtlas(int glyph_width, int glyph_height, char first_char, std::vector<Mask> glyphs);

  /// The embedded 5x7 ASCII font (characters 32..126).
  static GlyphAtlas builtin();

  /// Cuts glyphs out of an atlas image laid out `columns` per row.
  static GlyphAtlas from_raster(const io::Raster8& atlas, int glyph_width, int glyph_height, char first_char,
                                int glyph_count, int columns);
  io::Raster8 to_raster(int columns) const;

  int glyph_width() const noexcept { return glyph_width_; }
  int glyph_height() const noexcept { return glyph_height_; }
  char first_char() const noexcept { return first_char_; }
  int glyph_count() const noexcept { return static_cast<int>(glyphs_.size()); }

  /// Unknown characters render as blanks.
  const Mask& glyph(char c) const;

 private:
  int glyph_width_ = 0;
  int glyph_height_ = 0;
  char first_char_ = ' ';
  std::vector<Mask> glyphs_;
  Mask blank_;
};

/// Scaled glyph width for a given text size (line height in pixels).
int scaled_glyph_width(const GlyphAtlas& atlas, int size);

/// Nearest-neighbor scale of one glyph to height `size`.
Mask render_glyph(const GlyphAtlas& atlas, char c, int size);

/// Glyphs side by side, separated by max(1, size / glyph_height) blank columns.
Mask render_text(const GlyphAtlas& atlas, std::string_view text, int size);

}  // namespace imgobf
