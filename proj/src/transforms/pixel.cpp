#include "imgobf/transforms/pixel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "imgobf/core/color.hpp"
#include "imgobf/core/error.hpp"

namespace imgobf {

namespace {

struct Block {
  int x0, y0, w, h;
};

// Row-major tiling; the last row/column of blocks may be smaller.
template <class Fn>
void for_each_block(int height, int width, int block_size, Fn&& fn) {
  for (int y0 = 0; y0 < height; y0 += block_size) {
    for (int x0 = 0; x0 < width; x0 += block_size) {
      fn(Block{x0, y0, std::min(block_size, width - x0), std::min(block_size, height - y0)});
    }
  }
}

int wrap(int v, int n) {
  const int r = v % n;
  return r < 0 ? r + n : r;
}

// Scan-order indices of a w x h block sorted by distance from its center.
std::vector<int> center_order(int w, int h, bool chebyshev) {
  const double cx = (w - 1) / 2.0;
  const double cy = (h - 1) / 2.0;
  std::vector<int> order(static_cast<std::size_t>(w * h));
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](int i) {
    const double dx = std::fabs(i % w - cx);
    const double dy = std::fabs(i / w - cy);
    const double euclid = dx * dx + dy * dy;
    return chebyshev ? std::pair{std::max(dx, dy), euclid} : std::pair{euclid, 0.0};
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
  return order;
}

double tri_wave(double u) { return 1.0 - std::fabs(2.0 * (u - std::floor(u)) - 1.0); }

void draw_zigzag(std::vector<std::uint8_t>& marks, int w, int h, int periods) {
  if (periods <= 0) return;
  const double amp = h - 1;
  for (int x = 0; x < w; ++x) {
    const double u0 = static_cast<double>(x) / w * periods;
    const double u1 = static_cast<double>(x + 1) / w * periods;
    double lo = std::min(tri_wave(u0), tri_wave(u1));
    double hi = std::max(tri_wave(u0), tri_wave(u1));
    // Extrema of the wave that fall inside this column.
    if (std::floor(u1) > std::floor(u0) || std::floor(u0) == u0) lo = 0.0;
    if (std::floor(u1 - 0.5) > std::floor(u0 - 0.5)) hi = 1.0;
    const int r0 = static_cast<int>(std::lround(lo * amp));
    const int r1 = static_cast<int>(std::lround(hi * amp));
    for (int r = r0; r <= r1; ++r) marks[static_cast<std::size_t>(r * w + x)] = 1;
  }
}

}  // namespace

int block_count(int height, int width, int block_size) {
  require(block_size >= 1, "block_size must be >= 1");
  return ((height + block_size - 1) / block_size) * ((width + block_size - 1) / block_size);
}

std::vector<BlockNoise> draw_block_noise(int count, RngStream& rng) {
  std::vector<BlockNoise> out(static_cast<std::size_t>(count));
  for (auto& n : out) {
    n.channel = static_cast<int>(rng.uniform_int(3));
    n.value = rng.uniform();
  }
  return out;
}

ImageBuffer color_noise_blocks(const ImageBuffer& img, int block_size, std::span<const BlockNoise> noise) {
  require(block_size >= 1 && block_size <= std::max(img.height(), img.width()),
          "color_noise_blocks: block_size out of range");
  if (noise.size() != static_cast<std::size_t>(block_count(img.height(), img.width(), block_size))) {
    fail(ErrorCode::InvalidArgument, "color_noise_blocks: one noise draw per block required");
  }
  ImageBuffer out = img;
  std::size_t b = 0;
  for_each_block(img.height(), img.width(), block_size, [&](const Block& blk) {
    const BlockNoise& n = noise[b++];
    require(n.channel >= 0 && n.channel < 3, "color_noise_blocks: channel must be 0..2");
    for (int y = blk.y0; y < blk.y0 + blk.h; ++y) {
      for (int x = blk.x0; x < blk.x0 + blk.w; ++x) {
        double v = img.at(y, x, n.channel) + n.value;
        if (v > 1.0) v -= 1.0;
        out.at(y, x, n.channel) = clamp01(v);
      }
    }
  });
  return out;
}

ImageBuffer color_noise_blocks(const ImageBuffer& img, int block_size, RngStream& rng) {
  const auto noise = draw_block_noise(block_count(img.height(), img.width(), block_size), rng);
  return color_noise_blocks(img, block_size, noise);
}

ImageBuffer halftone(const ImageBuffer& img, int block_size, HalftoneTechnique technique, RngStream& rng) {
  require(block_size >= 2, "halftone: block_size must be >= 2");
  ImageBuffer out(img.height(), img.width(), kBlack);
  const int max_periods = block_size / 2;
  // Orderings depend only on block shape; at most four distinct shapes occur.
  std::vector<std::pair<std::pair<int, int>, std::vector<int>>> cache;
  auto order_for = [&](int w, int h) -> const std::vector<int>& {
    for (const auto& [shape, order] : cache) {
      if (shape.first == w && shape.second == h) return order;
    }
    cache.emplace_back(std::pair{w, h}, center_order(w, h, technique == HalftoneTechnique::Squares));
    return cache.back().second;
  };

  for_each_block(img.height(), img.width(), block_size, [&](const Block& blk) {
    const int area = blk.w * blk.h;
    for (int c = 0; c < 3; ++c) {
      double sum = 0.0;
      for (int y = blk.y0; y < blk.y0 + blk.h; ++y) {
        for (int x = blk.x0; x < blk.x0 + blk.w; ++x) sum += img.at(y, x, c);
      }
      const double mean = sum / area;
      std::vector<std::uint8_t> marks(static_cast<std::size_t>(area), 0);
      switch (technique) {
        case HalftoneTechnique::Circles:
        case HalftoneTechnique::Squares: {
          const auto& order = order_for(blk.w, blk.h);
          const long n = std::lround(mean * area);
          for (long i = 0; i < n; ++i) marks[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
          break;
        }
        case HalftoneTechnique::Zigzag:
          draw_zigzag(marks, blk.w, blk.h, static_cast<int>(std::lround(mean * max_periods)));
          break;
        case HalftoneTechnique::RandomPixels: {
          const long n = std::lround(mean * area);
          std::vector<int> idx(static_cast<std::size_t>(area));
          std::iota(idx.begin(), idx.end(), 0);
          for (long i = 0; i < n; ++i) {
            const auto j = static_cast<std::size_t>(i) +
                           static_cast<std::size_t>(rng.uniform_int(static_cast<std::uint64_t>(area - i)));
            std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
            marks[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] = 1;
          }
          break;
        }
      }
      for (int i = 0; i < area; ++i) {
        if (marks[static_cast<std::size_t>(i)]) out.at(blk.y0 + i / blk.w, blk.x0 + i % blk.w, c) = 1.0;
      }
    }
  });
  return out;
}

ImageBuffer invert_lines(const ImageBuffer& img, const StripeSpec& stripes) {
  require(stripes.width >= 1, "invert_lines: stripe width must be >= 1");
  ImageBuffer out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (stripe_index(stripes, y, x) % 2 == 0) continue;
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = 1.0 - img.at(y, x, c);
    }
  }
  return out;
}

ImageBuffer line_shift(const ImageBuffer& img, const StripeSpec& stripes, int shift) {
  require(stripes.width >= 1, "line_shift: stripe width must be >= 1");
  const int along = stripes.horizontal ? img.width() : img.height();
  require(std::abs(shift) < along, "line_shift: |shift| must be smaller than the image side");
  ImageBuffer out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const int offset = stripe_index(stripes, y, x) % 2 == 0 ? shift : -shift;
      if (stripes.horizontal) {
        out.set_pixel(y, x, img.pixel(y, wrap(x + offset, along)));
      } else {
        out.set_pixel(y, x, img.pixel(wrap(y + offset, along), x));
      }
    }
  }
  return out;
}

ImageBuffer rotate_blocks(const ImageBuffer& img, int block_size, int rotations) {
  require(block_size >= 2 && block_size % 2 == 0, "rotate_blocks: block_size must be even and >= 2");
  require(rotations >= 0, "rotate_blocks: rotations must be non-negative");
  const int r = rotations % 4;
  if (r == 0) return img;
  ImageBuffer out = img;
  for_each_block(img.height(), img.width(), block_size, [&](const Block& blk) {
    const int hw = blk.w / 2;
    const int hh = blk.h / 2;
    if (hw == 0 || hh == 0) return;
    // Clockwise positions: TL, TR, BR, BL.
    const std::array<std::pair<int, int>, 4> origin{{{0, 0}, {hw, 0}, {hw, hh}, {0, hh}}};
    for (int q = 0; q < 4; ++q) {
      const auto [sx, sy] = origin[static_cast<std::size_t>(q)];
      const auto [dx, dy] = origin[static_cast<std::size_t>((q + r) % 4)];
      for (int j = 0; j < hh; ++j) {
        for (int i = 0; i < hw; ++i) {
          out.set_pixel(blk.y0 + dy + j, blk.x0 + dx + i, img.pixel(blk.y0 + sy + j, blk.x0 + sx + i));
        }
      }
    }
  });
  return out;
}

int TrianglePartition::region(int y, int x, int height, int width) const {
  const double apex = apex_x * width;
  const double half = 0.5 * scale * width;
  const double px = x + 0.5;
  const double t = (y + 0.5) / height;  // 0 at the top edge, 1 at the bottom
  const double left = (apex - half) + half * t;
  const double right = (apex + half) - half * t;
  if (px < left) return 0;
  if (px >= right) return 2;
  return 1;
}

ImageBuffer low_contrast_triangles(const ImageBuffer& img, const TrianglePartition& partition,
                                   const std::array<double, 3>& factors) {
  require(partition.scale > 0.0, "low_contrast_triangles: scale must be positive");
  for (double f : factors) require(f >= 0.0, "low_contrast_triangles: factors must be non-negative");
  ImageBuffer out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double f = factors[static_cast<std::size_t>(partition.region(y, x, img.height(), img.width()))];
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = contrast_value(img.at(y, x, c), f);
    }
  }
  return out;
}

}  // namespace imgobf
