// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include "core/sphere_geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "core/error.hpp"

namespace panoedit::geom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec3 mul(const Mat3 &m, const Vec3 &v) noexcept {
  return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
          m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
          m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

Vec3 mul_transposed(const Mat3 &m, const Vec3 &v) noexcept {
  return {m[0][0] * v[0] + m[1][0] * v[1] + m[2][0] * v[2],
          m[0][1] * v[0] + m[1][1] * v[1] + m[2][1] * v[2],
          m[0][2] * v[0] + m[1][2] * v[1] + m[2][2] * v[2]};
}

Mat3 matmul(const Mat3 &a, const Mat3 &b) noexcept {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
  return r;
}

} // namespace

Vec3 SphericalDirection::to_vector() const noexcept {
  const double cl = std::cos(lat);
  return {cl * std::sin(lon), std::sin(lat), cl * std::cos(lon)};
}

SphericalDirection SphericalDirection::from_vector(const Vec3 &v) {
  const double horiz = std::hypot(v[0], v[2]);
  require(horiz > 0.0 || v[1] != 0.0, ErrorCode::Domain, "zero-length direction");
  return {wrap_lon(std::atan2(v[0], v[2])), std::atan2(v[1], horiz)};
}

double wrap_lon(double lon) noexcept {
  if (lon >= -kPi && lon < kPi)
    return lon;
  double r = std::fmod(lon + kPi, kTwoPi);
  if (r < 0.0)
    r += kTwoPi;
  double out = r - kPi;
  if (out >= kPi)
    out = -kPi;
  return out;
}

void check_erp_extent(int width, int height) {
  if (height <= 0 || width != 2 * height)
    fail(ErrorCode::Domain,
         "ERP raster must satisfy W = 2H, got " + std::to_string(width) + "x" + std::to_string(height));
}

SphericalDirection erp_to_direction(double col, double row, int width, int height) {
  check_erp_extent(width, height);
  if (!(row >= 0.0 && row <= static_cast<double>(height)))
    fail(ErrorCode::Domain, "row " + std::to_string(row) + " outside [0, H]");
  const double lon = kTwoPi * col / static_cast<double>(width) - kPi;
  const double lat = kPi / 2.0 - kPi * row / static_cast<double>(height);
  return {wrap_lon(lon), lat};
}

ErpCoord direction_to_erp(const SphericalDirection &dir, int width, int height) {
  check_erp_extent(width, height);
  const double lon = wrap_lon(dir.lon);
  return {(lon + kPi) * static_cast<double>(width) / kTwoPi,
          (kPi / 2.0 - dir.lat) * static_cast<double>(height) / kPi};
}

void sample_bilinear(const Image &img, double col, double row, std::span<double> out) {
  const int w = img.width();
  const int h = img.height();
  double cw = std::fmod(col, static_cast<double>(w));
  if (cw < 0.0)
    cw += static_cast<double>(w);
  if (cw >= static_cast<double>(w))
    cw = 0.0;
  const double r = std::clamp(row, 0.0, static_cast<double>(h - 1));

  const int i0 = static_cast<int>(std::floor(cw));
  const int j0 = static_cast<int>(std::floor(r));
  const double a = cw - i0;
  const double b = r - j0;
  const int i1 = (i0 + 1) % w;
  const int j1 = std::min(j0 + 1, h - 1);

  const double w00 = (1.0 - a) * (1.0 - b);
  const double w10 = a * (1.0 - b);
  const double w01 = (1.0 - a) * b;
  const double w11 = a * b;
  for (int c = 0; c < img.channels(); ++c)
    out[static_cast<std::size_t>(c)] = w00 * img.at(i0, j0, c) + w10 * img.at(i1, j0, c) +
                                       w01 * img.at(i0, j1, c) + w11 * img.at(i1, j1, c);
}

std::vector<double> sample_bilinear(const Image &img, double col, double row) {
  std::vector<double> out(static_cast<std::size_t>(img.channels()));
  sample_bilinear(img, col, row, out);
  return out;
}

void sample_bilinear_clamped(const Image &img, double col, double row, std::span<double> out) {
  const double cc = std::clamp(col, 0.0, static_cast<double>(img.width() - 1));
  const double rc = std::clamp(row, 0.0, static_cast<double>(img.height() - 1));
  const int i0 = static_cast<int>(std::floor(cc));
  const int j0 = static_cast<int>(std::floor(rc));
  const double a = cc - i0;
  const double b = rc - j0;
  const int i1 = std::min(i0 + 1, img.width() - 1);
  const int j1 = std::min(j0 + 1, img.height() - 1);
  const double w00 = (1.0 - a) * (1.0 - b);
  const double w10 = a * (1.0 - b);
  const double w01 = (1.0 - a) * b;
  const double w11 = a * b;
  for (int c = 0; c < img.channels(); ++c)
    out[static_cast<std::size_t>(c)] = w00 * img.at(i0, j0, c) + w10 * img.at(i1, j0, c) +
                                       w01 * img.at(i0, j1, c) + w11 * img.at(i1, j1, c);
}

void CameraPose::validate() const {
  if (!(hfov >= kMinFov && hfov < kPi))
    fail(ErrorCode::Domain, "hfov " + std::to_string(hfov) + " outside (0, pi)");
  if (out_width <= 0 || out_height <= 0)
    fail(ErrorCode::Domain, "camera output size must be positive");
  if (!std::isfinite(yaw) || !std::isfinite(pitch) || !std::isfinite(roll))
    fail(ErrorCode::Domain, "camera angles must be finite");
}

Mat3 CameraPose::rotation() const noexcept {
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cr = std::cos(roll), sr = std::sin(roll);
  const Mat3 ry{{{cy, 0.0, sy}, {0.0, 1.0, 0.0}, {-sy, 0.0, cy}}};
  // Rotation about x by -pitch, so positive pitch tilts the axis toward +y.
  const Mat3 rx{{{1.0, 0.0, 0.0}, {0.0, cp, sp}, {0.0, -sp, cp}}};
  const Mat3 rz{{{cr, -sr, 0.0}, {sr, cr, 0.0}, {0.0, 0.0, 1.0}}};
  return matmul(ry, matmul(rx, rz));
}

double CameraPose::tan_half_hfov() const noexcept { return std::tan(hfov / 2.0); }

double CameraPose::tan_half_vfov() const noexcept {
  return tan_half_hfov() * static_cast<double>(out_height) / static_cast<double>(out_width);
}

Vec3 camera_ray(const CameraPose &cam, double x, double y) {
  const double tx = cam.tan_half_hfov();
  const double ty = cam.tan_half_vfov();
  const Vec3 local{(2.0 * x / cam.out_width - 1.0) * tx, (1.0 - 2.0 * y / cam.out_height) * ty, 1.0};
  return mul(cam.rotation(), local);
}

Image project_to_perspective(const Image &erp, const CameraPose &cam) {
  cam.validate();
  check_erp_extent(erp.width(), erp.height());
  const Mat3 rot = cam.rotation();
  const double tx = cam.tan_half_hfov();
  const double ty = cam.tan_half_vfov();
  Image out(cam.out_width, cam.out_height, erp.channels());
  for (int j = 0; j < cam.out_height; ++j) {
    for (int i = 0; i < cam.out_width; ++i) {
      const Vec3 local{(2.0 * (i + 0.5) / cam.out_width - 1.0) * tx,
                       (1.0 - 2.0 * (j + 0.5) / cam.out_height) * ty, 1.0};
      const auto dir = SphericalDirection::from_vector(mul(rot, local));
      const ErpCoord p = direction_to_erp(dir, erp.width(), erp.height());
      sample_bilinear(erp, p.col - 0.5, p.row - 0.5, out.pixel(i, j));
    }
  }
  return out;
}

Backprojection backproject_to_erp(const Image &persp, const CameraPose &cam, int width, int height) {
  cam.validate();
  check_erp_extent(width, height);
  if (persp.width() != cam.out_width || persp.height() != cam.out_height)
    fail(ErrorCode::Shape, "perspective image " + persp.shape_string() + " does not match camera " +
                               std::to_string(cam.out_width) + "x" + std::to_string(cam.out_height));
  const Mat3 rot = cam.rotation();
  const double tx = cam.tan_half_hfov();
  const double ty = cam.tan_half_vfov();
  Backprojection result{Image(width, height, persp.channels()), Image(width, height, 1)};
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      const auto dir = erp_to_direction(col + 0.5, row + 0.5, width, height);
      const Vec3 c = mul_transposed(rot, dir.to_vector());
      if (!(c[2] > 0.0))
        continue;
      const double px = c[0] / c[2];
      const double py = c[1] / c[2];
      if (std::abs(px) > tx || std::abs(py) > ty)
        continue;
      const double x = (px / tx + 1.0) * cam.out_width / 2.0;
      const double y = (1.0 - py / ty) * cam.out_height / 2.0;
      sample_bilinear_clamped(persp, x - 0.5, y - 0.5, result.patch.pixel(col, row));
      result.footprint.at(col, row) = 1.0;
    }
  }
  return result;
}

const char *cube_face_name(CubeFace face) noexcept {
  switch (face) {
  case CubeFace::Front: return "front";
  case CubeFace::Right: return "right";
  case CubeFace::Back: return "back";
  case CubeFace::Left: return "left";
  case CubeFace::Up: return "up";
  case CubeFace::Down: return "down";
  }
  return "?";
}

Vec3 cube_face_direction(CubeFace face, double u, double v) noexcept {
  switch (face) {
  case CubeFace::Front: return {u, -v, 1.0};
  case CubeFace::Right: return {1.0, -v, -u};
  case CubeFace::Back: return {-u, -v, -1.0};
  case CubeFace::Left: return {-1.0, -v, u};
  case CubeFace::Up: return {u, 1.0, v};
  case CubeFace::Down: return {u, -1.0, -v};
  }
  return {0.0, 0.0, 1.0};
}

FaceCoord direction_to_cube_face(const Vec3 &d) noexcept {
  const double ax = std::abs(d[0]), ay = std::abs(d[1]), az = std::abs(d[2]);
  if (ax >= ay && ax >= az) {
    if (d[0] > 0.0)
      return {CubeFace::Right, -d[2] / ax, -d[1] / ax};
    return {CubeFace::Left, d[2] / ax, -d[1] / ax};
  }
  if (ay >= az) {
    if (d[1] > 0.0)
      return {CubeFace::Up, d[0] / ay, d[2] / ay};
    return {CubeFace::Down, d[0] / ay, -d[2] / ay};
  }
  if (d[2] > 0.0)
    return {CubeFace::Front, d[0] / az, -d[1] / az};
  return {CubeFace::Back, -d[0] / az, -d[1] / az};
}

CubeMap erp_to_cubemap(const Image &erp, int face_size) {
  check_erp_extent(erp.width(), erp.height());
  require(face_size >= 2, ErrorCode::InvalidArgument, "cube face size must be >= 2");
  CubeMap cube;
  cube.face_size = face_size;
  for (CubeFace f : kCubeFaces) {
    Image face(face_size, face_size, erp.channels());
    for (int j = 0; j < face_size; ++j) {
      for (int i = 0; i < face_size; ++i) {
        const double u = 2.0 * (i + 0.5) / face_size - 1.0;
        const double v = 2.0 * (j + 0.5) / face_size - 1.0;
        const auto dir = SphericalDirection::from_vector(cube_face_direction(f, u, v));
        const ErpCoord p = direction_to_erp(dir, erp.width(), erp.height());
        sample_bilinear(erp, p.col - 0.5, p.row - 0.5, face.pixel(i, j));
      }
    }
    cube.face(f) = std::move(face);
  }
  return cube;
}

Image cubemap_to_erp(const CubeMap &cube, int width, int height) {
  check_erp_extent(width, height);
  const int fs = cube.face_size;
  require(fs >= 2, ErrorCode::InvalidArgument, "cube face size must be >= 2");
  const int channels = cube.faces[0].channels();
  for (const Image &f : cube.faces)
    require(f.width() == fs && f.height() == fs && f.channels() == channels, ErrorCode::Shape,
            "cube faces must be square, equal-sized and share a channel count");
  Image out(width, height, channels);
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      const auto dir = erp_to_direction(col + 0.5, row + 0.5, width, height);
      const FaceCoord fc = direction_to_cube_face(dir.to_vector());
      const double x = (fc.u + 1.0) / 2.0 * fs;
      const double y = (fc.v + 1.0) / 2.0 * fs;
      sample_bilinear_clamped(cube.face(fc.face), x - 0.5, y - 0.5, out.pixel(col, row));
    }
  }
  return out;
}

double BBox::width(int erp_width) const noexcept {
  return wraps() ? (x1 + erp_width - x0) : (x1 - x0);
}

ErpCoord BBox::center(int erp_width) const noexcept {
  double cx = x0 + width(erp_width) / 2.0;
  if (cx >= erp_width)
    cx -= erp_width;
  return {cx, (y0 + y1) / 2.0};
}

bool BBox::contains_pixel(int col, int row, int erp_width) const noexcept {
  (void)erp_width;
  const double c = col, r = row;
  if (!(r >= y0 && r + 1.0 <= y1))
    return false;
  if (!wraps())
    return c >= x0 && c + 1.0 <= x1;
  return c >= x0 || c + 1.0 <= x1;
}

void BBox::validate(int erp_width, int erp_height) const {
  const bool ok = y0 >= 0.0 && y0 < y1 && y1 <= erp_height && x0 >= 0.0 && x0 <= erp_width &&
                  x1 >= 0.0 && x1 <= erp_width && x0 != x1 && width(erp_width) > 0.0;
  if (!ok)
    fail(ErrorCode::InvalidArgument, "invalid bbox (" + std::to_string(x0) + ", " + std::to_string(y0) +
                                         ", " + std::to_string(x1) + ", " + std::to_string(y1) + ")");
}

BBox bbox_of_mask(const Image &mask, double threshold) {
  require(mask.channels() == 1, ErrorCode::Shape, "bbox_of_mask expects a single-channel mask");
  const int w = mask.width();
  const int h = mask.height();
  std::vector<char> occupied(static_cast<std::size_t>(w), 0);
  int row_min = h, row_max = -1;
  for (int row = 0; row < h; ++row)
    for (int col = 0; col < w; ++col)
      if (mask.at(col, row) >= threshold) {
        occupied[static_cast<std::size_t>(col)] = 1;
        row_min = std::min(row_min, row);
        row_max = std::max(row_max, row);
      }
  if (row_max < 0)
    fail(ErrorCode::EmptyMask, "mask has no pixel above threshold " + std::to_string(threshold));

  const int first_occupied = static_cast<int>(std::find(occupied.begin(), occupied.end(), 1) - occupied.begin());
  // Walk the circle starting at an occupied column and collect empty runs.
  int best_start = -1, best_len = 0;
  bool best_wraps = false;
  int best_x0 = 0;
  int k = 0;
  while (k < w) {
    const int col = (first_occupied + k) % w;
    if (occupied[static_cast<std::size_t>(col)]) {
      ++k;
      continue;
    }
    int len = 0;
    while (k + len < w && !occupied[static_cast<std::size_t>((first_occupied + k + len) % w)])
      ++len;
    const int x0 = (col + len) % w;
    const int x1 = col == 0 ? w : col;
    const bool wraps = x0 > x1;
    const bool better = len > best_len || (len == best_len && best_wraps && !wraps) ||
                        (len == best_len && wraps == best_wraps && x0 < best_x0);
    if (better) {
      best_start = col;
      best_len = len;
      best_wraps = wraps;
      best_x0 = x0;
    }
    k += len;
  }
  BBox box;
  box.y0 = row_min;
  box.y1 = row_max + 1;
  if (best_start < 0) {
    box.x0 = 0;
    box.x1 = w;
  } else {
    box.x0 = best_x0;
    box.x1 = best_start == 0 ? w : best_start;
  }
  return box;
}

} // namespace panoedit::geom
