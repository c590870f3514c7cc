#pragma once

#include <array>

#include "imgobf/core/image.hpp"
#include "imgobf/core/rng.hpp"

namespace imgobf {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// 3x3 projective map stored row-major with m[8] normalized to 1 when nonzero.
class Homography {
 public:
  Homography() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}
  /// Throws Degenerate when |det| <= 1e-12.
  explicit Homography(const std::array<double, 9>& m);

  static Homography identity() { return Homography(); }
  static Homography translation(double dx, double dy) { return Homography({1, 0, dx, 0, 1, dy, 0, 0, 1}); }
  static Homography scaling(double sx, double sy) { return Homography({sx, 0, 0, 0, sy, 0, 0, 0, 1}); }

  double operator()(int row, int col) const { return m_[static_cast<std::size_t>(row * 3 + col)]; }
  const std::array<double, 9>& matrix() const noexcept { return m_; }
  double determinant() const noexcept;

  /// Projective application; the w component is returned through `w` when
  /// requested so callers can reject points mapped behind the plane.
  Point2 apply(Point2 p, double* w = nullptr) const noexcept;
  Homography inverse() const;

  friend Homography operator*(const Homography& a, const Homography& b);

 private:
  std::array<double, 9> m_;
};

struct QuadCorrespondence {
  std::array<Point2, 4> src;
  std::array<Point2, 4> dst;
};

/// True when some three of the points are (numerically) collinear.
bool has_collinear_triple(const std::array<Point2, 4>& pts);

/// Exact four-point solve of the 8x8 system (h33 = 1) by Gaussian elimination
/// with partial pivoting. Degenerate input throws ErrorCode::Degenerate.
Homography solve_homography(const QuadCorrespondence& q);

/// Inverse mapping: each output pixel samples `img` bilinearly at h^-1(p);
/// taps outside the source read as `fill`.
ImageBuffer warp_perspective(const ImageBuffer& img, const Homography& h, Rgb fill = kBlack);

/// Image corners in pixel-center coordinates: TL, TR, BR, BL.
std::array<Point2, 4> image_corners(int width, int height);

/// One point per quadrant, uniform in the square of half-side `jitter_radius`
/// around the quadrant center, ordered TL, TR, BR, BL. Collinear draws are
/// retried up to 16 times.
std::array<Point2, 4> draw_perspective_corners(RngStream& rng, int width, int height, double jitter_radius);

ImageBuffer perspective_transform_obfuscation(const ImageBuffer& img, RngStream& rng, double jitter_radius);

/// Source coordinate sampled for output pixel `out` when rotating a
/// width x height image by `degrees` (clockwise on screen) about its center.
Point2 rotation_source(Point2 out, double degrees, int width, int height);
ImageBuffer rotate_image(const ImageBuffer& img, double degrees);

struct SwirlParams {
  double strength = 0.0;  // radians at the center
  double radius = 1.0;    // decay length in pixels
  Point2 center;
};

/// Source coordinate for output `out`: the polar angle about the center is
/// advanced by strength * exp(-rho / radius).
Point2 swirl_source(Point2 out, const SwirlParams& p);
ImageBuffer swirl_warp(const ImageBuffer& img, const SwirlParams& p);

struct WaveParams {
  double wavelength = 1.0;
  double amplitude = 0.0;
  double hue_shift = 0.0;  // degrees
};

/// Horizontal displacement of row y: amplitude * sin(2*pi*y / wavelength).
double wave_displacement(int row, const WaveParams& p);
ImageBuffer wavy_color_warp(const ImageBuffer& img, const WaveParams& p);

}  // namespace imgobf
