// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>

#include "core/grid.hpp"

namespace panoedit::seam {

struct SeamConfig {
  int extension = 8;   // b, latent columns copied from the left edge
  int shift = 8;       // s, roll offset in columns
  int shift_steps = 4; // K, rolled steps at the start of denoising
  int steps = 20;      // T
  double strength = 1.0; // initial noise level in (0, 1]
  bool baseline = false; // no extension, no roll, no blending

  void validate(int width) const;
};

/// Scheduler state handed to the denoiser. tau runs from `strength` at
/// t = T down to strength / T at t = 1; dt = strength / T.
struct StepInfo {
  int t = 0;
  int steps = 0;
  double tau = 0.0;
  double dt = 0.0;
};

/// Velocity predictor: (latent, step, condition) -> velocity of the same
/// shape. The latent update is z <- z + dt * v, so v points toward data.
/// The condition is rolled together with the latent.
using Denoiser = std::function<Latent(const Latent &z, const StepInfo &step, const Latent &cond)>;

/// Rectified-flow stand-in that treats the condition as its target:
/// v = (x0_hat - z) / tau with x0_hat = cond. With edge_leak > 0 the
/// prediction at the `edge_width` outermost columns of its input window is
/// (1 - l) * cond + l * z, l falling linearly from edge_leak at the border;
/// this imitates a model that cannot see across the wrap-around boundary.
class ToyDenoiser {
public:
  explicit ToyDenoiser(double edge_leak = 0.0, int edge_width = 2);

  Latent operator()(const Latent &z, const StepInfo &step, const Latent &cond) const;
  double leak_at(int col, int width) const noexcept;

private:
  double edge_leak_;
  int edge_width_;
};

/// Appends the first b columns to the right edge.
Latent extend_boundary(const Latent &z, int b);
/// First `width` columns.
Latent crop_width(const Latent &z, int width);
/// Horizontal circular shift: out[x] = z[(x - s) mod w].
Latent cyclic_roll(const Latent &z, int s);
/// Crossfades columns [0, b) with [w, w + b) using lambda(i) = i / (b - 1)
/// (0.5 for b = 1): both become lambda * z[i] + (1 - lambda) * z[w + i].
Latent blend_boundary(const Latent &z_ext, int b);

/// Extend, noise, T Euler steps with rolls after the first K, undo the net
/// roll, blend, crop.
Latent run_seam_inference(const Denoiser &denoiser, const Latent &z_src, const Latent &cond,
                          const SeamConfig &cfg, std::uint64_t seed);

/// Mean |z[:, :, w - 1] - z[:, :, 0]| over channels and rows.
double seam_discontinuity(const Latent &z);
double seam_discontinuity(const Image &img);

} // namespace panoedit::seam
