// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "core/grid.hpp"

namespace panoedit::attn {

/// Single-channel attention map with its extrema.
struct AttentionMap {
  Image values;
  double a_min = 0.0;
  double a_max = 0.0;

  /// Extrema taken from the values themselves.
  static AttentionMap from_values(Image values);
  bool degenerate() const noexcept { return !(a_min < a_max); }
};

/// Latitude profile alpha(y) evaluated at the latitudes of token centers of an h x w grid.
Image alpha_grid(int height, int width);

struct ModulationResult {
  Image residual;
  bool degenerate = false; // constant map: residual is zero
};

/// R = alpha * (M * (a_max - A) - (1 - M) * (A - a_min)), elementwise.
ModulationResult modulation_residual(const AttentionMap &attention, const Image &mask, const Image &alpha);

/// A' = A + R, keeping the extrema of A. For M and alpha in [0, 1] the
/// update is a convex combination of A and a_max / a_min, so A' stays in
/// [a_min, a_max].
AttentionMap apply_modulation(const AttentionMap &attention, const Image &residual);

/// Convenience: residual with alpha_grid() and the updated map.
struct Modulated {
  AttentionMap map;
  ModulationResult residual;
};
Modulated modulate(const AttentionMap &attention, const Image &mask);

} // namespace panoedit::attn
