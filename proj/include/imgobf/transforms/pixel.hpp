#pragma once

#include <array>
#include <span>
#include <vector>

#include "imgobf/core/image.hpp"
#include "imgobf/core/rng.hpp"

namespace imgobf {

/// Alternating lines along one axis. Horizontal stripes are bands of rows.
struct StripeSpec {
  bool horizontal = true;
  int width = 1;
};

/// Index of the stripe containing pixel (y, x), counted from the top/left edge.
inline int stripe_index(const StripeSpec& s, int y, int x) { return (s.horizontal ? y : x) / s.width; }

/// One block's noise: `value` in [0,1) is added to `channel` with wraparound.
struct BlockNoise {
  int channel = 0;
  double value = 0.0;
};

/// Blocks in row-major order, ragged edge blocks included.
int block_count(int height, int width, int block_size);

/// Draws channel then value for each block in row-major order.
std::vector<BlockNoise> draw_block_noise(int count, RngStream& rng);

ImageBuffer color_noise_blocks(const ImageBuffer& img, int block_size, std::span<const BlockNoise> noise);
ImageBuffer color_noise_blocks(const ImageBuffer& img, int block_size, RngStream& rng);

enum class HalftoneTechnique { Circles, Squares, Zigzag, RandomPixels };
inline constexpr int kNumHalftoneTechniques = 4;

/// Per channel and per block, a mark of value 1 on a 0 background whose
/// coverage follows the block mean: Circles/Squares set round(mean*area)
/// pixels nearest the block center (Euclidean/Chebyshev), Zigzag draws
/// round(mean*block_size/2) periods, RandomPixels sets round(mean*area)
/// pixels chosen with `rng`.
ImageBuffer halftone(const ImageBuffer& img, int block_size, HalftoneTechnique technique, RngStream& rng);

ImageBuffer invert_lines(const ImageBuffer& img, const StripeSpec& stripes);

/// Even stripes move by -shift, odd stripes by +shift, wrapping around.
ImageBuffer line_shift(const ImageBuffer& img, const StripeSpec& stripes, int shift);

/// Clockwise cycle of the four sub-blocks (TL -> TR -> BR -> BL -> TL),
/// applied `rotations` times inside every block.
ImageBuffer rotate_blocks(const ImageBuffer& img, int block_size, int rotations);

/// Three regions cut by two lines that start on the top edge, `scale * width`
/// apart and centered on `apex_x`, and meet at (apex_x, height) on the bottom
/// edge. Region 0 is left of the triangle, 1 the triangle, 2 the right side.
struct TrianglePartition {
  double scale = 0.5;
  double apex_x = 0.5;  // fraction of the image width

  int region(int y, int x, int height, int width) const;
};

ImageBuffer low_contrast_triangles(const ImageBuffer& img, const TrianglePartition& partition,
                                   const std::array<double, 3>& factors);

}  // namespace imgobf
