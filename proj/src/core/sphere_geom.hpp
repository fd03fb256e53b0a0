// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <vector>

#include "core/grid.hpp"

namespace panoedit::geom {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>; // row-major

// Frame convention (one table for every projection in the library):
//
//   axis | direction          | ERP location
//   -----+--------------------+------------------------------
//   +z   | front              | lon = 0,      lat = 0 (image center)
//   +x   | right              | lon = +pi/2   (three quarters across)
//   -z   | back               | lon = -pi     (left/right seam)
//   -x   | left               | lon = -pi/2   (one quarter across)
//   +y   | up                 | lat = +pi/2   (row 0)
//   -y   | down               | lat = -pi/2   (row H)
//
// Continuous ERP coordinates: lon = 2*pi*col/W - pi, lat = pi/2 - pi*row/H,
// so the center of pixel (c, r) sits at (c + 0.5, r + 0.5). Rasters are
// W = 2H, wrap circularly in x, clamp in y.

struct SphericalDirection {
  double lon = 0.0; // [-pi, pi)
  double lat = 0.0; // [-pi/2, pi/2]

  Vec3 to_vector() const noexcept;
  static SphericalDirection from_vector(const Vec3 &v);
};

struct ErpCoord {
  double col = 0.0;
  double row = 0.0;
};

/// Wraps an angle into [-pi, pi).
double wrap_lon(double lon) noexcept;

/// Validates W = 2H and positive extent.
void check_erp_extent(int width, int height);

SphericalDirection erp_to_direction(double col, double row, int width, int height);
ErpCoord direction_to_erp(const SphericalDirection &dir, int width, int height);

/// Bilinear sample in pixel-index space (integer coordinates are pixel
/// centers). Columns wrap modulo W, rows clamp to [0, H - 1].
void sample_bilinear(const Image &img, double col, double row, std::span<double> out);
std::vector<double> sample_bilinear(const Image &img, double col, double row);

/// Bilinear sample with both axes clamped (perspective views, cube faces).
void sample_bilinear_clamped(const Image &img, double col, double row, std::span<double> out);

struct CameraPose {
  double yaw = 0.0;   // view-center longitude
  double pitch = 0.0; // view-center latitude, positive looks up
  double roll = 0.0;  // about the view axis
  double hfov = 0.0;  // horizontal field of view, (0, pi)
  int out_width = 0;
  int out_height = 0;

  void validate() const;
  /// Camera-to-world rotation; maps the optical axis (0, 0, 1) to the
  /// direction (yaw, pitch).
  Mat3 rotation() const noexcept;
  double tan_half_hfov() const noexcept;
  double tan_half_vfov() const noexcept;
};

/// Smallest accepted field of view.
inline constexpr double kMinFov = 1e-6;

/// World direction of continuous perspective coordinate (x, y).
Vec3 camera_ray(const CameraPose &cam, double x, double y);

Image project_to_perspective(const Image &erp, const CameraPose &cam);

struct Backprojection {
  Image patch;     // W x H x C, zero outside the footprint
  Image footprint; // W x H x 1, exactly 1 inside the frustum and 0 elsewhere
};

Backprojection backproject_to_erp(const Image &persp, const CameraPose &cam, int width, int height);

enum class CubeFace { Front = 0, Right, Back, Left, Up, Down };
inline constexpr std::array<CubeFace, 6> kCubeFaces = {CubeFace::Front, CubeFace::Right, CubeFace::Back,
                                                       CubeFace::Left,  CubeFace::Up,    CubeFace::Down};
const char *cube_face_name(CubeFace face) noexcept;

struct CubeMap {
  int face_size = 0;
  std::array<Image, 6> faces; // indexed by CubeFace

  const Image &face(CubeFace f) const noexcept { return faces[static_cast<int>(f)]; }
  Image &face(CubeFace f) noexcept { return faces[static_cast<int>(f)]; }
};

/// Direction of face coordinate (u, v) in [-1, 1]^2; u grows to the right
/// of the face image and v grows downward.
Vec3 cube_face_direction(CubeFace face, double u, double v) noexcept;

struct FaceCoord {
  CubeFace face;
  double u;
  double v;
};
FaceCoord direction_to_cube_face(const Vec3 &dir) noexcept;

CubeMap erp_to_cubemap(const Image &erp, int face_size);
Image cubemap_to_erp(const CubeMap &cube, int width, int height);

/// ERP box in pixel-edge coordinates. Rows span [y0, y1); columns span
/// [x0, x1) or, when x0 > x1, the wrapped range [x0, W) + [0, x1).
struct BBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  bool wraps() const noexcept { return x0 > x1; }
  double width(int erp_width) const noexcept;
  double height() const noexcept { return y1 - y0; }
  /// Continuous center, column wrapped into [0, W).
  ErpCoord center(int erp_width) const noexcept;
  bool contains_pixel(int col, int row, int erp_width) const noexcept;
  void validate(int erp_width, int erp_height) const;

  friend bool operator==(const BBox &, const BBox &) = default;
};

/// Tightest wrap-aware box around pixels >= threshold; the seam
/// interpretation is chosen to minimize width.
BBox bbox_of_mask(const Image &mask, double threshold);

} // namespace panoedit::geom
