// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include "core/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "core/error.hpp"
#include "core/philox.hpp"
#include "core/sphere_geom.hpp"

namespace panoedit::distortion {

double scale_factor(double y, int height) {
  require(height > 0, ErrorCode::Domain, "height must be positive");
  const double h = static_cast<double>(height);
  if (!(y >= 0.0 && y <= h))
    fail(ErrorCode::Domain, "y = " + std::to_string(y) + " outside [0, H]");
  // cos(pi/2 - pi*y/H) written as sin of the distance to the nearer pole,
  // which makes the poles, the equator and the symmetry exact.
  return std::sin(std::numbers::pi * std::min(y, h - y) / h);
}

double alpha_at(double y, int height) { return 1.0 - scale_factor(y, height); }

AlphaProfile AlphaProfile::sample(int height) {
  AlphaProfile p;
  p.height = height;
  p.values.resize(static_cast<std::size_t>(height));
  for (int row = 0; row < height; ++row)
    p.values[static_cast<std::size_t>(row)] = alpha_at(row, height);
  return p;
}

Image distortion_map(int width, int height) {
  geom::check_erp_extent(width, height);
  const AlphaProfile profile = AlphaProfile::sample(height);
  Image map(width, height, 1);
  for (int row = 0; row < height; ++row)
    for (int col = 0; col < width; ++col)
      map.at(col, row) = profile.values[static_cast<std::size_t>(row)];
  return map;
}

Latent gaussian_field(int channels, int height, int width, std::uint64_t seed, std::uint64_t stream) {
  Latent field(channels, height, width);
  auto values = field.values();
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = philox_normal(seed, stream, i);
  return field;
}

Latent stretch_rows(const Latent &base) {
  const int w = base.width();
  const int h = base.height();
  Latent out(base.channels(), h, w);
  const double half = w / 2.0;
  for (int y = 0; y < h; ++y) {
    const double d = scale_factor(y, h);
    for (int x = 0; x < w; ++x) {
      const double xr = half + (x + 0.5 - half) * d;
      // Pixel-index position of the remapped coordinate, wrapped into [0, W).
      double p = std::fmod(xr - 0.5, static_cast<double>(w));
      if (p < 0.0)
        p += w;
      if (p >= w)
        p = 0.0;
      const int i0 = static_cast<int>(std::floor(p));
      const double a = p - i0;
      const int i1 = (i0 + 1) % w;
      for (int c = 0; c < base.channels(); ++c)
        out.at(c, y, x) = (1.0 - a) * base.at(c, y, i0) + a * base.at(c, y, i1);
    }
  }
  return out;
}

void normalize(Latent &field, NoiseNormalization mode) {
  if (mode == NoiseNormalization::None)
    return;
  auto standardize = [](std::span<double> v) {
    if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) {
      std::fill(v.begin(), v.end(), 0.0);
      return;
    }
    double mean = 0.0;
    for (double x : v)
      mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v)
      var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    const double inv = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
    for (double &x : v)
      x = (x - mean) * inv;
  };
  for (int c = 0; c < field.channels(); ++c) {
    auto plane = field.plane(c);
    if (mode == NoiseNormalization::PerChannel) {
      standardize(plane);
    } else {
      for (int y = 0; y < field.height(); ++y)
        standardize(plane.subspan(static_cast<std::size_t>(y) * static_cast<std::size_t>(field.width()),
                                  static_cast<std::size_t>(field.width())));
    }
  }
}

NoiseField distorted_noise(int channels, int height, int width, std::uint64_t seed, NoiseNormalization mode) {
  geom::check_erp_extent(width, height);
  require(channels > 0, ErrorCode::InvalidArgument, "channel count must be positive");
  NoiseField field{stretch_rows(gaussian_field(channels, height, width, seed)), seed};
  normalize(field.values, mode);
  return field;
}

} // namespace panoedit::distortion
