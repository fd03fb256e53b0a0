// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include "core/attention_mod.hpp"

#include <algorithm>

#include "core/distortion.hpp"
#include "core/error.hpp"

namespace panoedit::attn {

AttentionMap AttentionMap::from_values(Image values) {
  require(values.channels() == 1, ErrorCode::Shape, "attention map must be single-channel");
  const auto [lo, hi] = std::minmax_element(values.values().begin(), values.values().end());
  AttentionMap map;
  map.a_min = *lo;
  map.a_max = *hi;
  map.values = std::move(values);
  return map;
}

Image alpha_grid(int height, int width) {
  Image alpha(width, height, 1);
  for (int row = 0; row < height; ++row) {
    const double a = distortion::alpha_at(row + 0.5, height);
    for (int col = 0; col < width; ++col)
      alpha.at(col, row) = a;
  }
  return alpha;
}

ModulationResult modulation_residual(const AttentionMap &attention, const Image &mask, const Image &alpha) {
  const Image &a = attention.values;
  if (!a.same_shape(mask) || !a.same_shape(alpha))
    fail(ErrorCode::Shape, "modulation inputs disagree: A " + a.shape_string() + ", M " + mask.shape_string() +
                               ", alpha " + alpha.shape_string());
  ModulationResult result{Image(a.width(), a.height(), 1), attention.degenerate()};
  if (result.degenerate)
    return result;
  auto r = result.residual.values();
  auto av = a.values();
  auto mv = mask.values();
  auto alv = alpha.values();
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double m = mv[i];
    r[i] = alv[i] * (m * (attention.a_max - av[i]) - (1.0 - m) * (av[i] - attention.a_min));
  }
  return result;
}

AttentionMap apply_modulation(const AttentionMap &attention, const Image &residual) {
  require(attention.values.same_shape(residual), ErrorCode::Shape, "residual shape mismatch");
  AttentionMap out{attention.values, attention.a_min, attention.a_max};
  auto v = out.values.values();
  auto r = residual.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    // Rounding in A + R can land one ulp past an extremum.
    v[i] = std::clamp(v[i] + r[i], attention.a_min, attention.a_max);
  return out;
}

Modulated modulate(const AttentionMap &attention, const Image &mask) {
  const Image alpha = alpha_grid(attention.values.height(), attention.values.width());
  ModulationResult res = modulation_residual(attention, mask, alpha);
  AttentionMap map = apply_modulation(attention, res.residual);
  return {std::move(map), std::move(res)};
}

} // namespace panoedit::attn
