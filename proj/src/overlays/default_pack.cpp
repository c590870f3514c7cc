// Procedural generator for the default asset pack. Everything here is drawn
// from noise, gradients and geometric primitives, so the pack contains no
// photographed objects and can be released as CC0.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "imgobf/core/error.hpp"
#include "imgobf/core/rng.hpp"
#include "imgobf/io/codec.hpp"
#include "imgobf/io/files.hpp"
#include "imgobf/overlays/assets.hpp"

namespace imgobf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kPhotoSide = 224;
constexpr int kIconSide = 64;
constexpr int kPatternSide = 32;
constexpr int kPatchSide = 48;
constexpr int kStyleSide = 128;
constexpr double kPi = std::numbers::pi;

double hash01(std::int64_t x, std::int64_t y, std::uint64_t seed) {
  const std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(x) * 0x9e3779b97f4a7c15ULL ^
                                                       static_cast<std::uint64_t>(y) * 0xc2b2ae3d27d4eb4fULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

double value_noise(double x, double y, std::uint64_t seed) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const auto ix = static_cast<std::int64_t>(fx);
  const auto iy = static_cast<std::int64_t>(fy);
  const double tx = smooth(x - fx);
  const double ty = smooth(y - fy);
  const double a = hash01(ix, iy, seed);
  const double b = hash01(ix + 1, iy, seed);
  const double c = hash01(ix, iy + 1, seed);
  const double d = hash01(ix + 1, iy + 1, seed);
  return (a * (1 - tx) + b * tx) * (1 - ty) + (c * (1 - tx) + d * tx) * ty;
}

double fbm(double x, double y, std::uint64_t seed, int octaves) {
  double sum = 0.0;
  double amp = 0.5;
  double norm = 0.0;
  for (int o = 0; o < octaves; ++o) {
    sum += amp * value_noise(x, y, seed + static_cast<std::uint64_t>(o) * 7919);
    norm += amp;
    x *= 2.0;
    y *= 2.0;
    amp *= 0.5;
  }
  return sum / norm;
}

Rgb rgb8(int r, int g, int b) { return {r / 255.0, g / 255.0, b / 255.0}; }

Rgb lerp(Rgb a, Rgb b, double t) {
  t = clamp01(t);
  return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

// Piecewise-linear palette lookup, t in [0,1].
Rgb palette(const std::vector<Rgb>& stops, double t) {
  t = clamp01(t) * static_cast<double>(stops.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(t), stops.size() - 2);
  return lerp(stops[i], stops[i + 1], t - static_cast<double>(i));
}

ImageBuffer paint(int side, const std::function<Rgb(double, double)>& fn) {
  ImageBuffer img(side, side);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const Rgb c = fn(x, y);
      img.set_pixel(y, x, {clamp01(c.r), clamp01(c.g), clamp01(c.b)});
    }
  }
  return img;
}

ImageBuffer palette_noise(int side, std::uint64_t seed, const std::vector<Rgb>& stops, double scale, int octaves) {
  return paint(side, [&](double x, double y) { return palette(stops, fbm(x / scale, y / scale, seed, octaves)); });
}

bool in_polygon(const std::vector<Point2>& poly, double x, double y) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if ((a.y > y) != (b.y > y) && x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x) inside = !inside;
  }
  return inside;
}

std::vector<Point2> star_polygon(int points, double outer, double inner, double rotation) {
  std::vector<Point2> poly;
  for (int i = 0; i < 2 * points; ++i) {
    const double r = i % 2 == 0 ? outer : inner;
    const double a = rotation + kPi * i / points;
    poly.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return poly;
}

// ----------------------------------------------------------------- photos

ImageBuffer photo(int k) {
  const std::uint64_t seed = 0x5eed0000ULL + static_cast<std::uint64_t>(k);
  const int s = kPhotoSide;
  switch (k) {
    case 0:  // rolling hills under a pale sky
      return paint(s, [&](double x, double y) {
        Rgb c = lerp(rgb8(120, 170, 230), rgb8(235, 240, 250), y / (0.5 * s));
        const std::array<Rgb, 3> hill{rgb8(90, 140, 70), rgb8(60, 110, 50), rgb8(40, 80, 35)};
        for (int layer = 0; layer < 3; ++layer) {
          const double base = s * (0.45 + 0.17 * layer);
          const double h = base + 14.0 * std::sin(x / (30.0 + 9 * layer) + layer) +
                           10.0 * fbm(x / 40.0, layer * 3.0, seed, 3);
          if (y > h) c = lerp(hill[static_cast<std::size_t>(layer)], rgb8(30, 50, 25), 0.3 * fbm(x / 9.0, y / 9.0, seed + 3, 2));
        }
        return c;
      });
    case 1:  // clouds
      return paint(s, [&](double x, double y) {
        const double n = fbm(x / 48.0, y / 32.0, seed, 5);
        return lerp(rgb8(70, 130, 210), rgb8(250, 250, 252), smooth(clamp01((n - 0.4) * 2.5)));
      });
    case 2:  // marble
      return paint(s, [&](double x, double y) {
        const double v = 0.5 + 0.5 * std::sin(x * 0.05 + y * 0.02 + 7.0 * fbm(x / 50.0, y / 50.0, seed, 4));
        return palette({rgb8(90, 90, 100), rgb8(200, 195, 185), rgb8(245, 240, 230)}, v);
      });
    case 3:  // wood grain
      return paint(s, [&](double x, double y) {
        const double r = std::hypot(x - 0.3 * s, (y + 1.5 * s) * 0.25) + 9.0 * fbm(x / 30.0, y / 60.0, seed, 3);
        const double t = r / 9.0 - std::floor(r / 9.0);
        return palette({rgb8(110, 65, 30), rgb8(170, 110, 60), rgb8(205, 150, 95)}, smooth(t));
      });
    case 4:  // sunset over water
      return paint(s, [&](double x, double y) {
        const double horizon = 0.62 * s;
        if (y < horizon) {
          Rgb c = palette({rgb8(70, 40, 110), rgb8(200, 80, 90), rgb8(250, 170, 70)}, y / horizon);
          if (std::hypot(x - 0.6 * s, y - 0.55 * s) < 22.0) c = rgb8(255, 225, 140);
          return c;
        }
        const double ripple = 0.5 + 0.5 * std::sin(y * 0.9 + 3.0 * fbm(x / 20.0, y / 6.0, seed, 2));
        return lerp(rgb8(30, 40, 80), rgb8(180, 100, 80), 0.4 * ripple);
      });
    case 5: {  // mosaic of cells
      RngStream rng(seed);
      std::vector<Point2> sites(36);
      std::vector<Rgb> colors(36);
      for (std::size_t i = 0; i < sites.size(); ++i) {
        sites[i] = {rng.uniform(0, s), rng.uniform(0, s)};
        colors[i] = {rng.uniform(0.35, 0.95), rng.uniform(0.35, 0.95), rng.uniform(0.35, 0.95)};
      }
      return paint(s, [&](double x, double y) {
        double best = 1e18;
        double second = 1e18;
        std::size_t idx = 0;
        for (std::size_t i = 0; i < sites.size(); ++i) {
          const double d = std::hypot(x - sites[i].x, y - sites[i].y);
          if (d < best) {
            second = best;
            best = d;
            idx = i;
          } else if (d < second) {
            second = d;
          }
        }
        return second - best < 2.0 ? rgb8(40, 40, 45) : colors[idx];
      });
    }
    case 6:  // ripples
      return paint(s, [&](double x, double y) {
        const double r = std::hypot(x - 0.4 * s, y - 0.45 * s);
        const double v = 0.5 + 0.5 * std::sin(r / 5.0 - 2.0 * fbm(x / 40.0, y / 40.0, seed, 2));
        return palette({rgb8(10, 60, 100), rgb8(40, 140, 180), rgb8(190, 230, 240)}, v);
      });
    case 7:  // brick wall
      return paint(s, [&](double x, double y) {
        const int row = static_cast<int>(y / 16.0);
        const double xo = x + (row % 2 ? 16.0 : 0.0);
        const int col = static_cast<int>(xo / 32.0);
        const bool mortar = std::fmod(y, 16.0) < 2.0 || std::fmod(xo, 32.0) < 2.0;
        if (mortar) return rgb8(200, 195, 185);
        const double tint = hash01(col, row, seed);
        return lerp(rgb8(150, 60, 45), rgb8(190, 100, 70), tint * 0.7 + 0.3 * fbm(x / 6.0, y / 6.0, seed, 2));
      });
    case 8:  // foliage texture
      return palette_noise(s, seed, {rgb8(20, 50, 20), rgb8(60, 120, 40), rgb8(150, 200, 80)}, 14.0, 4);
    default: {  // skyline at dusk
      RngStream rng(seed);
      std::vector<std::array<double, 3>> towers;  // x0, x1, top
      for (double x = 0; x < s;) {
        const double w = rng.uniform(14, 34);
        towers.push_back({x, x + w, rng.uniform(0.3 * s, 0.75 * s)});
        x += w + rng.uniform(0, 4);
      }
      return paint(s, [&](double x, double y) {
        for (const auto& t : towers) {
          if (x >= t[0] && x < t[1] && y >= t[2]) {
            const bool window = std::fmod(x - t[0], 6.0) > 2.0 && std::fmod(y - t[2], 8.0) > 3.0 &&
                                hash01(static_cast<std::int64_t>(x / 6), static_cast<std::int64_t>(y / 8), seed) > 0.55;
            return window ? rgb8(250, 220, 120) : rgb8(35, 35, 50);
          }
        }
        return lerp(rgb8(20, 30, 80), rgb8(230, 130, 90), y / s);
      });
    }
  }
}

// ----------------------------------------------------------------- scenes

struct SceneSpec {
  const char* name;
  double cx, cy, hw, hh;  // quad center and half extents, fractions of the side
  double taper, tilt;     // perspective: top edge inset and right edge drop
  int occluder;           // 0 none, 1 vertical bar, 2 horizontal bar, 3 corner blob
};

constexpr std::array<SceneSpec, kNumScenes> kScenes{{
    {"phone_screen", 0.50, 0.50, 0.17, 0.30, 0.03, 0.02, 3},
    {"window", 0.48, 0.45, 0.32, 0.28, 0.05, 0.00, 1},
    {"television", 0.50, 0.42, 0.36, 0.24, 0.00, 0.04, 0},
    {"billboard", 0.55, 0.35, 0.35, 0.18, 0.04, 0.06, 2},
    {"picture_frame", 0.45, 0.50, 0.25, 0.30, 0.02, 0.03, 0},
    {"laptop", 0.50, 0.40, 0.30, 0.20, 0.06, 0.00, 3},
    {"tablet", 0.52, 0.52, 0.27, 0.33, 0.02, 0.05, 0},
    {"poster", 0.40, 0.45, 0.22, 0.33, 0.03, 0.02, 1},
    {"monitor", 0.50, 0.38, 0.34, 0.22, 0.00, 0.05, 2},
    {"shop_window", 0.50, 0.55, 0.38, 0.30, 0.07, 0.00, 1},
    {"book_page", 0.55, 0.55, 0.28, 0.34, 0.05, 0.04, 3},
    {"projector_screen", 0.50, 0.40, 0.40, 0.25, 0.03, 0.00, 0},
    {"mirror", 0.50, 0.48, 0.24, 0.36, 0.00, 0.03, 2},
    {"postcard", 0.45, 0.55, 0.30, 0.20, 0.04, 0.05, 3},
}};

std::array<Point2, 4> scene_quad(const SceneSpec& sp) {
  const double s = kPhotoSide - 1;
  const double x0 = (sp.cx - sp.hw) * s;
  const double x1 = (sp.cx + sp.hw) * s;
  const double y0 = (sp.cy - sp.hh) * s;
  const double y1 = (sp.cy + sp.hh) * s;
  const double inset = sp.taper * s;
  const double drop = sp.tilt * s;
  return {{{x0 + inset, y0}, {x1 - inset, y0 + drop}, {x1, y1 - drop}, {x0, y1}}};
}

std::vector<Point2> expand(const std::array<Point2, 4>& q, double by) {
  Point2 c{};
  for (const auto& p : q) c = {c.x + p.x / 4, c.y + p.y / 4};
  std::vector<Point2> out;
  for (const auto& p : q) {
    const double d = std::hypot(p.x - c.x, p.y - c.y);
    out.push_back({p.x + (p.x - c.x) / d * by, p.y + (p.y - c.y) / d * by});
  }
  return out;
}

struct Scene {
  ImageBuffer photo;
  io::Raster8 mask;
  std::array<Point2, 4> quad;
};

Scene scene(int k) {
  const SceneSpec& sp = kScenes[static_cast<std::size_t>(k)];
  const std::uint64_t seed = 0x5ce4e000ULL + static_cast<std::uint64_t>(k);
  const int s = kPhotoSide;
  const auto quad = scene_quad(sp);
  const auto frame = expand(quad, 7.0);
  const std::vector<Point2> inner(quad.begin(), quad.end());
  const std::vector<std::vector<Rgb>> walls{
      {rgb8(180, 170, 150), rgb8(220, 210, 190)}, {rgb8(90, 110, 130), rgb8(150, 170, 190)},
      {rgb8(120, 90, 70), rgb8(190, 160, 120)},   {rgb8(80, 120, 90), rgb8(160, 190, 150)},
  };
  const auto& wall = walls[static_cast<std::size_t>(k) % walls.size()];

  io::Raster8 mask{s, s, 1, std::vector<std::uint8_t>(static_cast<std::size_t>(s * s), 0)};
  auto occluded = [&](double x, double y) {
    switch (sp.occluder) {
      case 1: return std::fabs(x - (quad[0].x + quad[1].x) / 2) < 4.0;
      case 2: return std::fabs(y - (quad[0].y + quad[3].y) / 2) < 3.0;
      case 3: return std::hypot(x - quad[3].x - 6, y - quad[3].y + 4) < 22.0;
      default: return false;
    }
  };
  ImageBuffer img = paint(s, [&](double x, double y) {
    if (occluded(x, y)) {
      mask.data[static_cast<std::size_t>(y) * static_cast<std::size_t>(s) + static_cast<std::size_t>(x)] = 255;
      return sp.occluder == 3 ? lerp(rgb8(40, 100, 40), rgb8(90, 160, 70), fbm(x / 5, y / 5, seed, 2))
                              : rgb8(60, 55, 50);
    }
    if (in_polygon(inner, x, y)) return rgb8(20, 20, 24);
    if (in_polygon(frame, x, y)) return rgb8(45, 45, 50);
    const double floor_line = 0.82 * s;
    if (y > floor_line) return lerp(rgb8(100, 80, 60), rgb8(60, 45, 35), fbm(x / 12, y / 3, seed + 9, 3));
    return palette(wall, 0.6 * fbm(x / 40, y / 40, seed, 3) + 0.4 * y / s);
  });
  return {std::move(img), std::move(mask), quad};
}

// ------------------------------------------------------------------ icons

io::Raster8 icon(int k) {
  const std::array<Rgb, kNumIcons> colors{rgb8(240, 200, 30), rgb8(220, 40, 60),  rgb8(40, 120, 220),
                                          rgb8(40, 170, 80),  rgb8(230, 120, 30), rgb8(150, 80, 200),
                                          rgb8(30, 190, 190), rgb8(240, 90, 160), rgb8(250, 230, 60),
                                          rgb8(110, 110, 120)};
  const auto star = star_polygon(5, 0.95, 0.4, -kPi / 2);
  const auto hexagon = star_polygon(3, 0.9, 0.9, 0.0);
  const std::vector<Point2> triangle{{0.0, -0.9}, {0.85, 0.75}, {-0.85, 0.75}};
  const std::vector<Point2> bolt{{0.2, -0.95}, {-0.5, 0.1}, {-0.05, 0.1}, {-0.25, 0.95}, {0.55, -0.2}, {0.1, -0.2}};
  auto inside = [&](double u, double v) {
    const double r = std::hypot(u, v);
    switch (k) {
      case 0: return in_polygon(star, u, v);
      case 1: {  // heart
        const double x = u * 1.15;
        const double y = -v * 1.15 + 0.25;
        return std::pow(x * x + y * y - 1.0, 3) - x * x * y * y * y <= 0.0;
      }
      case 2: return r <= 0.9;
      case 3: return in_polygon(triangle, u, v);
      case 4: return (std::fabs(u) < 0.3 && std::fabs(v) < 0.9) || (std::fabs(v) < 0.3 && std::fabs(u) < 0.9);
      case 5: return r <= 0.9 && std::hypot(u - 0.4, v - 0.2) > 0.7;
      case 6: return std::fabs(u) + std::fabs(v) <= 0.92;
      case 7: return r <= 0.9 && r >= 0.55;
      case 8: return in_polygon(bolt, u, v);
      default: return in_polygon(hexagon, u, v);
    }
  };
  io::Raster8 r{kIconSide, kIconSide, 4, {}};
  const Rgb c = colors[static_cast<std::size_t>(k)];
  for (int y = 0; y < kIconSide; ++y) {
    for (int x = 0; x < kIconSide; ++x) {
      int hits = 0;
      for (int sy = 0; sy < 4; ++sy) {
        for (int sx = 0; sx < 4; ++sx) {
          const double u = ((x + (sx + 0.5) / 4.0) / kIconSide) * 2.0 - 1.0;
          const double v = ((y + (sy + 0.5) / 4.0) / kIconSide) * 2.0 - 1.0;
          hits += inside(u, v) ? 1 : 0;
        }
      }
      // Darker rim toward the edge of the shape gives the icons some depth.
      const double shade = 0.8 + 0.2 * (1.0 - static_cast<double>(y) / kIconSide);
      r.data.insert(r.data.end(), {io::quantize(c.r * shade), io::quantize(c.g * shade), io::quantize(c.b * shade),
                                   io::quantize(hits / 16.0)});
    }
  }
  return r;
}

// --------------------------------------------------------------- patterns

io::Raster8 pattern(int k) {
  io::Raster8 r{kPatternSide, kPatternSide, 1, {}};
  for (int y = 0; y < kPatternSide; ++y) {
    for (int x = 0; x < kPatternSide; ++x) {
      bool on = false;
      switch (k) {
        case 0: on = y % 8 < 3; break;
        case 1: on = x % 8 < 3; break;
        case 2: on = (x + y) % 8 < 3; break;
        case 3: on = (x / 8 + y / 8) % 2 == 0; break;
        case 4: on = std::hypot(x % 8 - 3.5, y % 8 - 3.5) < 2.6; break;
        case 5: on = x % 8 < 2 || y % 8 < 2; break;
        case 6: on = (x + y) % 8 < 2 || (x - y + kPatternSide) % 8 < 2; break;
        case 7: {
          const int t = x % 8;
          on = std::abs(y % 8 - (t < 4 ? t : 8 - t) * 2 + 1) <= 1;
          break;
        }
        default:
          on = std::fabs(std::fmod(y, 16.0) - (8.0 + 4.0 * std::sin(2.0 * kPi * x / kPatternSide))) < 2.0;
          break;
      }
      r.data.push_back(on ? 255 : 0);
    }
  }
  return r;
}

// ---------------------------------------------------------------- patches

io::Raster8 patch(int k) {
  const std::uint64_t seed = 0xadbe0000ULL + static_cast<std::uint64_t>(k);
  io::Raster8 r{kPatchSide, kPatchSide, 4, {}};
  const double c = (kPatchSide - 1) / 2.0;
  for (int y = 0; y < kPatchSide; ++y) {
    for (int x = 0; x < kPatchSide; ++x) {
      Rgb col;
      double a = 1.0;
      switch (k) {
        case 0:
          col = {hash01(x / 3, y / 3, seed), hash01(x / 3, y / 3, seed + 1), hash01(x / 3, y / 3, seed + 2)};
          break;
        case 1: {
          const double d = std::hypot(x - c, y - c);
          const double t = 0.5 + 0.5 * std::sin(d * 1.3 + 6.0 * hash01(x / 2, y / 2, seed));
          col = palette({rgb8(255, 0, 128), rgb8(0, 255, 200), rgb8(255, 240, 0)}, t);
          a = d <= c + 0.5 ? 1.0 : 0.0;
          break;
        }
        default: {
          const double t = 0.5 + 0.5 * std::sin((x + 2 * y) * 0.8 + 4.0 * value_noise(x / 4.0, y / 4.0, seed));
          col = lerp(rgb8(20, 0, 60), rgb8(255, 140, 0), t);
          const double dx = std::max(0.0, std::fabs(x - c) - (c - 8));
          const double dy = std::max(0.0, std::fabs(y - c) - (c - 8));
          a = std::hypot(dx, dy) <= 8.5 ? 1.0 : 0.0;
          break;
        }
      }
      r.data.insert(r.data.end(), {io::quantize(col.r), io::quantize(col.g), io::quantize(col.b), io::quantize(a)});
    }
  }
  return r;
}

// ------------------------------------------------------ styles / textures

ImageBuffer style_image(int k) {
  const std::vector<std::vector<Rgb>> palettes{
      {rgb8(20, 40, 90), rgb8(60, 110, 170), rgb8(240, 210, 90)},   // night swirls
      {rgb8(200, 60, 40), rgb8(240, 160, 60), rgb8(250, 240, 200)},  // warm strokes
      {rgb8(30, 80, 50), rgb8(120, 160, 90), rgb8(230, 220, 170)},   // meadow
      {rgb8(60, 30, 70), rgb8(180, 80, 120), rgb8(250, 200, 210)},   // rose
      {rgb8(10, 10, 10), rgb8(120, 120, 120), rgb8(250, 250, 250)},  // charcoal
      {rgb8(0, 70, 120), rgb8(0, 160, 180), rgb8(250, 250, 220)},    // sea
      {rgb8(90, 50, 20), rgb8(200, 140, 60), rgb8(250, 220, 150)},   // ochre
  };
  const std::uint64_t seed = 0x57e1e000ULL + static_cast<std::uint64_t>(k);
  return paint(kStyleSide, [&](double x, double y) {
    const double warp = 6.0 * fbm(x / 30.0, y / 30.0, seed, 3);
    const double v = 0.5 + 0.5 * std::sin((x * std::cos(k) + y * std::sin(k)) / 7.0 + warp);
    return palette(palettes[static_cast<std::size_t>(k)], 0.7 * v + 0.3 * fbm(x / 8.0, y / 8.0, seed + 5, 2));
  });
}

ImageBuffer texture_image(int k) {
  const std::uint64_t seed = 0x7e47000ULL + static_cast<std::uint64_t>(k);
  const double scale = 4.0 + 3.0 * (k % 4);
  const std::vector<Rgb> stops{hash01(k, 0, seed) > 0.5 ? rgb8(30, 30, 30) : rgb8(90, 60, 40),
                               rgb8(static_cast<int>(100 + 15 * k), 120, static_cast<int>(200 - 12 * k)),
                               rgb8(235, 230, 220)};
  return palette_noise(kStyleSide, seed, stops, scale, 2 + k % 3);
}

// ---------------------------------------------------------------- writing

json file_entry(const fs::path& root, const std::string& rel, const std::string& name,
                const std::vector<std::uint8_t>& bytes) {
  io::write_atomic(root / rel, bytes);
  return {{"name", name}, {"file", rel}, {"sha256", io::sha256_hex(bytes)}};
}

std::string indexed(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%02d", prefix, i);
  return buf;
}

}  // namespace

void generate_default_pack(const fs::path& dir) {
  json m;
  m["format_version"] = kAssetFormatVersion;
  m["name"] = "imgobf-default";
  m["license"] = "CC0-1.0";
  m["license_note"] =
      "Procedurally generated; contains no photographs and none of the 16 evaluation super-classes.";

  for (int i = 0; i < kNumPhotos; ++i) {
    const auto name = indexed("photo", i);
    m["photos"].push_back(file_entry(dir, "photos/" + name + ".png", name, io::encode_png(io::to_raster(photo(i)))));
  }
  for (int i = 0; i < kNumScenes; ++i) {
    const Scene sc = scene(i);
    const std::string name = kScenes[static_cast<std::size_t>(i)].name;
    const std::string stem = "scenes/" + indexed("scene", i);
    json e = file_entry(dir, stem + ".png", name, io::encode_png(io::to_raster(sc.photo)));
    const auto mask_bytes = io::encode_png(sc.mask);
    io::write_atomic(dir / (stem + "_mask.png"), mask_bytes);
    e["mask"] = stem + "_mask.png";
    e["mask_sha256"] = io::sha256_hex(mask_bytes);
    for (const auto& p : sc.quad) e["quad"].push_back({p.x, p.y});
    m["scenes"].push_back(e);
  }
  const std::array<const char*, kNumIcons> icon_names{"star", "heart", "disc", "triangle", "plus",
                                                      "crescent", "diamond", "ring", "bolt", "hexagon"};
  for (int i = 0; i < kNumIcons; ++i) {
    m["icons"].push_back(file_entry(dir, "icons/" + indexed("icon", i) + ".png", icon_names[static_cast<std::size_t>(i)],
                                    io::encode_png(icon(i))));
  }
  const std::array<const char*, kNumPatterns> pattern_names{
      "horizontal_stripes", "vertical_stripes", "diagonal_stripes", "checkerboard", "dots",
      "grid", "crosshatch", "zigzag", "waves"};
  for (int i = 0; i < kNumPatterns; ++i) {
    m["patterns"].push_back(file_entry(dir, "patterns/" + indexed("pattern", i) + ".png",
                                       pattern_names[static_cast<std::size_t>(i)], io::encode_png(pattern(i))));
  }
  for (int i = 0; i < kNumPatches; ++i) {
    m["patches"].push_back(
        file_entry(dir, "patches/" + indexed("patch", i) + ".png", indexed("patch", i), io::encode_png(patch(i))));
  }
  const std::array<std::pair<const char*, std::array<int, 3>>, kNumColors> colors{{
      {"red", {255, 0, 0}},      {"green", {0, 200, 0}},    {"blue", {0, 0, 255}},
      {"yellow", {255, 255, 0}}, {"magenta", {255, 0, 255}}, {"cyan", {0, 255, 255}},
      {"orange", {255, 128, 0}}, {"purple", {128, 0, 255}}, {"white", {255, 255, 255}},
  }};
  for (const auto& [name, rgb] : colors) m["colors"].push_back({{"name", name}, {"rgb", rgb}});
  m["texts"] = {"HELLO WORLD",      "Lorem ipsum dolor sit amet", "OPEN 24/7",    "GAME OVER",
                "NO PARKING",       "Have a nice day!",           "SALE -50%",    "Welcome Home",
                "JUST DO IT LATER", "Keep Calm",                  "UNDER REPAIR", "Made with care",
                "Wish you were here"};

  const GlyphAtlas font = GlyphAtlas::builtin();
  const auto font_bytes = io::encode_png(font.to_raster(16));
  io::write_atomic(dir / "font/font_5x7.png", font_bytes);
  m["font"] = {{"file", "font/font_5x7.png"},
               {"sha256", io::sha256_hex(font_bytes)},
               {"glyph_width", font.glyph_width()},
               {"glyph_height", font.glyph_height()},
               {"first_char", static_cast<int>(font.first_char())},
               {"glyph_count", font.glyph_count()},
               {"columns", 16}};

  for (int i = 0; i < kNumStyles; ++i) {
    m["styles"].push_back(file_entry(dir, "styles/" + indexed("style", i) + ".png", indexed("style", i),
                                     io::encode_png(io::to_raster(style_image(i)))));
  }
  for (int i = 0; i < kNumTextures; ++i) {
    m["textures"].push_back(file_entry(dir, "textures/" + indexed("texture", i) + ".png", indexed("texture", i),
                                       io::encode_png(io::to_raster(texture_image(i)))));
  }
  io::write_atomic(dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace imgobf
