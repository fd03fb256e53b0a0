// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "core/grid.hpp"

namespace panoedit::distortion {

/// Horizontal stretch factor D(y) = cos(pi/2 - pi*y/H) for y in [0, H]:
/// 1 at the equator, 0 at the poles.
double scale_factor(double y, int height);

/// Latitude modulation profile alpha(y) = 1 - D(y).
double alpha_at(double y, int height);

/// Latitude profile sampled per raster row at y = row, so row 0 is the pole
/// and row H/2 the equator.
struct AlphaProfile {
  int height = 0;
  std::vector<double> values;

  static AlphaProfile sample(int height);
};

/// M_D(x, y) = 1 - D(y), broadcast over columns (rows at y = row, W = 2H).
Image distortion_map(int width, int height);

enum class NoiseNormalization { PerChannel, PerRow, None };

struct NoiseField {
  Latent values;
  std::uint64_t seed = 0;
};

/// Seeded i.i.d. standard-normal field, element (c, y, x) is Philox normal
/// number index(c, y, x) of stream 0.
Latent gaussian_field(int channels, int height, int width, std::uint64_t seed, std::uint64_t stream = 0);

/// Resamples every row of `base` at x'(x, y) = W/2 + (x - W/2) * D(y),
/// x = col + 0.5, with wrap-around bilinear interpolation; y is unchanged.
Latent stretch_rows(const Latent &base);

/// Standardizes in place; PerRow leaves constant rows at zero.
void normalize(Latent &field, NoiseNormalization mode);

/// Spatially-distorted noise: base draw, latitude-dependent horizontal
/// stretch, normalization.
NoiseField distorted_noise(int channels, int height, int width, std::uint64_t seed,
                           NoiseNormalization mode = NoiseNormalization::PerChannel);

} // namespace panoedit::distortion
