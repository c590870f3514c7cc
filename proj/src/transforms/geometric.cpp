#include "imgobf/transforms/geometric.hpp"

#include <cmath>
#include <numbers>

#include "imgobf/core/color.hpp"
#include "imgobf/core/error.hpp"
#include "imgobf/core/resample.hpp"

namespace imgobf {

namespace {

constexpr double kMinDeterminant = 1e-12;

double triangle_area2(Point2 a, Point2 b, Point2 c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// sin/cos that are exact at multiples of 90 degrees.
std::pair<double, double> sincos_degrees(double degrees) {
  double d = std::fmod(degrees, 360.0);
  if (d < 0.0) d += 360.0;
  if (d == 0.0) return {0.0, 1.0};
  if (d == 90.0) return {1.0, 0.0};
  if (d == 180.0) return {0.0, -1.0};
  if (d == 270.0) return {-1.0, 0.0};
  const double rad = d * std::numbers::pi / 180.0;
  return {std::sin(rad), std::cos(rad)};
}

}  // namespace

Homography::Homography(const std::array<double, 9>& m) : m_(m) {
  if (m_[8] != 0.0) {
    const double s = m_[8];
    for (double& v : m_) v /= s;
  }
  if (!(std::fabs(determinant()) > kMinDeterminant)) {
    fail(ErrorCode::Degenerate, "homography is not invertible");
  }
}

double Homography::determinant() const noexcept {
  const auto& a = m_;
  return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

Point2 Homography::apply(Point2 p, double* w) const noexcept {
  const double x = m_[0] * p.x + m_[1] * p.y + m_[2];
  const double y = m_[3] * p.x + m_[4] * p.y + m_[5];
  const double z = m_[6] * p.x + m_[7] * p.y + m_[8];
  if (w) *w = z;
  return {x / z, y / z};
}

Homography Homography::inverse() const {
  const auto& a = m_;
  const double det = determinant();
  std::array<double, 9> inv{
      (a[4] * a[8] - a[5] * a[7]) / det, (a[2] * a[7] - a[1] * a[8]) / det, (a[1] * a[5] - a[2] * a[4]) / det,
      (a[5] * a[6] - a[3] * a[8]) / det, (a[0] * a[8] - a[2] * a[6]) / det, (a[2] * a[3] - a[0] * a[5]) / det,
      (a[3] * a[7] - a[4] * a[6]) / det, (a[1] * a[6] - a[0] * a[7]) / det, (a[0] * a[4] - a[1] * a[3]) / det,
  };
  return Homography(inv);
}

Homography operator*(const Homography& a, const Homography& b) {
  std::array<double, 9> m{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a(r, k) * b(k, c);
      m[static_cast<std::size_t>(r * 3 + c)] = s;
    }
  }
  return Homography(m);
}

bool has_collinear_triple(const std::array<Point2, 4>& pts) {
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max({scale, std::fabs(p.x), std::fabs(p.y)});
  const double eps = 1e-9 * std::max(1.0, scale * scale);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      for (int k = j + 1; k < 4; ++k) {
        if (std::fabs(triangle_area2(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)],
                                     pts[static_cast<std::size_t>(k)])) <= eps) {
          return true;
        }
      }
    }
  }
  return false;
}

Homography solve_homography(const QuadCorrespondence& q) {
  if (has_collinear_triple(q.src) || has_collinear_triple(q.dst)) {
    fail(ErrorCode::Degenerate, "solve_homography: three corners are collinear");
  }
  // Rows: [x y 1 0 0 0 -ux -uy | u] and [0 0 0 x y 1 -vx -vy | v].
  double a[8][9] = {};
  for (int i = 0; i < 4; ++i) {
    const auto [x, y] = q.src[static_cast<std::size_t>(i)];
    const auto [u, v] = q.dst[static_cast<std::size_t>(i)];
    double* r0 = a[2 * i];
    double* r1 = a[2 * i + 1];
    r0[0] = x; r0[1] = y; r0[2] = 1; r0[6] = -u * x; r0[7] = -u * y; r0[8] = u;
    r1[3] = x; r1[4] = y; r1[5] = 1; r1[6] = -v * x; r1[7] = -v * y; r1[8] = v;
  }
  for (int col = 0; col < 8; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 8; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    if (std::fabs(a[pivot][col]) < 1e-12) fail(ErrorCode::Degenerate, "solve_homography: singular system");
    if (pivot != col) {
      for (int k = 0; k < 9; ++k) std::swap(a[col][k], a[pivot][k]);
    }
    for (int r = col + 1; r < 8; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int k = col; k < 9; ++k) a[r][k] -= f * a[col][k];
    }
  }
  std::array<double, 9> h{};
  for (int r = 7; r >= 0; --r) {
    double s = a[r][8];
    for (int k = r + 1; k < 8; ++k) s -= a[r][k] * h[static_cast<std::size_t>(k)];
    h[static_cast<std::size_t>(r)] = s / a[r][r];
  }
  h[8] = 1.0;
  return Homography(h);
}

ImageBuffer warp_perspective(const ImageBuffer& img, const Homography& h, Rgb fill) {
  const Homography inv = h.inverse();
  ImageBuffer out(img.height(), img.width(), fill);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      double w = 0.0;
      const Point2 s = inv.apply({static_cast<double>(x), static_cast<double>(y)}, &w);
      if (!(w > 0.0) || !std::isfinite(s.x) || !std::isfinite(s.y)) continue;
      out.set_pixel(y, x, sample_bilinear(img, s.x, s.y, fill));
    }
  }
  return out;
}

std::array<Point2, 4> image_corners(int width, int height) {
  const double r = width - 1;
  const double b = height - 1;
  return {{{0, 0}, {r, 0}, {r, b}, {0, b}}};
}

std::array<Point2, 4> draw_perspective_corners(RngStream& rng, int width, int height, double jitter_radius) {
  require(jitter_radius > 0.0 && jitter_radius < std::min(width, height) / 4.0,
          "perspective transform: jitter radius must lie in (0, side/4)");
  const double qx0 = (width - 1) / 4.0;
  const double qx1 = 3.0 * (width - 1) / 4.0;
  const double qy0 = (height - 1) / 4.0;
  const double qy1 = 3.0 * (height - 1) / 4.0;
  const std::array<Point2, 4> centers{{{qx0, qy0}, {qx1, qy0}, {qx1, qy1}, {qx0, qy1}}};
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::array<Point2, 4> pts;
    for (std::size_t i = 0; i < 4; ++i) {
      pts[i].x = rng.uniform(centers[i].x - jitter_radius, centers[i].x + jitter_radius);
      pts[i].y = rng.uniform(centers[i].y - jitter_radius, centers[i].y + jitter_radius);
    }
    if (!has_collinear_triple(pts)) return pts;
  }
  fail(ErrorCode::Degenerate, "perspective transform: 16 degenerate corner draws in a row");
}

ImageBuffer perspective_transform_obfuscation(const ImageBuffer& img, RngStream& rng, double jitter_radius) {
  const auto dst = draw_perspective_corners(rng, img.width(), img.height(), jitter_radius);
  const Homography h = solve_homography({image_corners(img.width(), img.height()), dst});
  return warp_perspective(img, h, kBlack);
}

Point2 rotation_source(Point2 out, double degrees, int width, int height) {
  const auto [s, c] = sincos_degrees(degrees);
  const double cx = (width - 1) / 2.0;
  const double cy = (height - 1) / 2.0;
  const double dx = out.x - cx;
  const double dy = out.y - cy;
  return {cx + c * dx + s * dy, cy - s * dx + c * dy};
}

ImageBuffer rotate_image(const ImageBuffer& img, double degrees) {
  if (std::fmod(degrees, 360.0) == 0.0) return img;
  ImageBuffer out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const Point2 s = rotation_source({static_cast<double>(x), static_cast<double>(y)}, degrees, img.width(),
                                       img.height());
      out.set_pixel(y, x, sample_bilinear(img, s.x, s.y, kBlack));
    }
  }
  return out;
}

Point2 swirl_source(Point2 out, const SwirlParams& p) {
  const double dx = out.x - p.center.x;
  const double dy = out.y - p.center.y;
  const double rho = std::hypot(dx, dy);
  if (rho == 0.0) return p.center;
  const double phi = std::atan2(dy, dx) + p.strength * std::exp(-rho / p.radius);
  return {p.center.x + rho * std::cos(phi), p.center.y + rho * std::sin(phi)};
}

ImageBuffer swirl_warp(const ImageBuffer& img, const SwirlParams& p) {
  require(p.radius > 0.0, "swirl_warp: radius must be positive");
  if (p.strength == 0.0) return img;
  ImageBuffer out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const Point2 s = swirl_source({static_cast<double>(x), static_cast<double>(y)}, p);
      out.set_pixel(y, x, sample_bilinear(img, s.x, s.y, kBlack));
    }
  }
  return out;
}

double wave_displacement(int row, const WaveParams& p) {
  return p.amplitude * std::sin(2.0 * std::numbers::pi * row / p.wavelength);
}

ImageBuffer wavy_color_warp(const ImageBuffer& img, const WaveParams& p) {
  require(p.wavelength > 0.0, "wavy_color_warp: wavelength must be positive");
  require(p.amplitude >= 0.0, "wavy_color_warp: amplitude must be non-negative");
  ImageBuffer shifted(img.height(), img.width());
  const int w = img.width();
  for (int y = 0; y < img.height(); ++y) {
    const double d = wave_displacement(y, p);
    for (int x = 0; x < w; ++x) {
      const double sx = x - d;
      const double fx = std::floor(sx);
      const double t = sx - fx;
      int x0 = static_cast<int>(std::fmod(fx, static_cast<double>(w)));
      if (x0 < 0) x0 += w;
      const int x1 = (x0 + 1) % w;
      Rgb v = img.pixel(y, x0);
      if (t != 0.0) {
        const Rgb v1 = img.pixel(y, x1);
        for (int c = 0; c < 3; ++c) v[c] = clamp01((1.0 - t) * v[c] + t * v1[c]);
      }
      shifted.set_pixel(y, x, v);
    }
  }
  return hue_rotate(shifted, p.hue_shift);
}

}  // namespace imgobf
