// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include "core/seam_inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/distortion.hpp"
#include "core/error.hpp"

namespace panoedit::seam {

namespace {

int positive_mod(long long v, int m) {
  const long long r = v % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

} // namespace

void SeamConfig::validate(int width) const {
  require(steps >= 1, ErrorCode::InvalidArgument, "denoise steps must be >= 1");
  require(strength > 0.0 && strength <= 1.0, ErrorCode::InvalidArgument, "strength must be in (0, 1]");
  if (baseline)
    return;
  if (!(extension > 0 && extension < width))
    fail(ErrorCode::InvalidArgument,
         "extension width " + std::to_string(extension) + " must be in (0, " + std::to_string(width) + ")");
  require(shift_steps >= 0 && shift_steps <= steps, ErrorCode::InvalidArgument, "shift steps must be in [0, T]");
  require(shift_steps == 0 || shift != 0, ErrorCode::InvalidArgument, "shift offset must be non-zero when K > 0");
}

ToyDenoiser::ToyDenoiser(double edge_leak, int edge_width) : edge_leak_(edge_leak), edge_width_(edge_width) {
  require(edge_leak >= 0.0 && edge_leak <= 1.0, ErrorCode::InvalidArgument, "edge leak must be in [0, 1]");
  require(edge_width >= 1, ErrorCode::InvalidArgument, "edge width must be >= 1");
}

double ToyDenoiser::leak_at(int col, int width) const noexcept {
  const int d = std::min(col, width - 1 - col);
  if (d >= edge_width_)
    return 0.0;
  return edge_leak_ * (1.0 - static_cast<double>(d) / edge_width_);
}

Latent ToyDenoiser::operator()(const Latent &z, const StepInfo &step, const Latent &cond) const {
  if (!cond.same_shape(z))
    fail(ErrorCode::Contract, "toy denoiser condition " + cond.shape_string() + " does not match latent " +
                                  z.shape_string());
  Latent v(z.channels(), z.height(), z.width());
  for (int c = 0; c < z.channels(); ++c)
    for (int y = 0; y < z.height(); ++y)
      for (int x = 0; x < z.width(); ++x) {
        const double l = leak_at(x, z.width());
        const double x0 = (1.0 - l) * cond.at(c, y, x) + l * z.at(c, y, x);
        v.at(c, y, x) = (x0 - z.at(c, y, x)) / step.tau;
      }
  return v;
}

Latent extend_boundary(const Latent &z, int b) {
  if (!(b > 0 && b < z.width()))
    fail(ErrorCode::InvalidArgument,
         "extension width " + std::to_string(b) + " must be in (0, " + std::to_string(z.width()) + ")");
  const int w = z.width();
  Latent out(z.channels(), z.height(), w + b);
  for (int c = 0; c < z.channels(); ++c)
    for (int y = 0; y < z.height(); ++y) {
      for (int x = 0; x < w; ++x)
        out.at(c, y, x) = z.at(c, y, x);
      for (int x = 0; x < b; ++x)
        out.at(c, y, w + x) = z.at(c, y, x);
    }
  return out;
}

Latent crop_width(const Latent &z, int width) {
  require(width > 0 && width <= z.width(), ErrorCode::InvalidArgument, "crop width out of range");
  Latent out(z.channels(), z.height(), width);
  for (int c = 0; c < z.channels(); ++c)
    for (int y = 0; y < z.height(); ++y)
      for (int x = 0; x < width; ++x)
        out.at(c, y, x) = z.at(c, y, x);
  return out;
}

Latent cyclic_roll(const Latent &z, int s) {
  const int w = z.width();
  const int shift = positive_mod(s, w);
  if (shift == 0)
    return z;
  Latent out(z.channels(), z.height(), w);
  for (int c = 0; c < z.channels(); ++c)
    for (int y = 0; y < z.height(); ++y)
      for (int x = 0; x < w; ++x)
        out.at(c, y, (x + shift) % w) = z.at(c, y, x);
  return out;
}

Latent blend_boundary(const Latent &z_ext, int b) {
  const int w = z_ext.width() - b;
  require(b > 0 && w > 0, ErrorCode::InvalidArgument, "blend band wider than the latent");
  Latent out = z_ext;
  for (int i = 0; i < b; ++i) {
    const double lambda = b == 1 ? 0.5 : static_cast<double>(i) / (b - 1);
    for (int c = 0; c < z_ext.channels(); ++c)
      for (int y = 0; y < z_ext.height(); ++y) {
        const double v = lambda * z_ext.at(c, y, i) + (1.0 - lambda) * z_ext.at(c, y, w + i);
        out.at(c, y, i) = v;
        out.at(c, y, w + i) = v;
      }
  }
  return out;
}

Latent run_seam_inference(const Denoiser &denoiser, const Latent &z_src, const Latent &cond,
                          const SeamConfig &cfg, std::uint64_t seed) {
  const int w = z_src.width();
  cfg.validate(w);
  if (!cond.same_extent(z_src))
    fail(ErrorCode::Shape, "condition " + cond.shape_string() + " does not match source " + z_src.shape_string());
  const int b = cfg.baseline ? 0 : cfg.extension;
  const int shift_steps = cfg.baseline ? 0 : cfg.shift_steps;

  Latent z0 = b > 0 ? extend_boundary(z_src, b) : z_src;
  Latent c = b > 0 ? extend_boundary(cond, b) : cond;

  const Latent noise = distortion::gaussian_field(z0.channels(), z0.height(), z0.width(), seed);
  Latent z(z0.channels(), z0.height(), z0.width());
  for (std::size_t i = 0; i < z.size(); ++i)
    z.values()[i] = (1.0 - cfg.strength) * z0.values()[i] + cfg.strength * noise.values()[i];

  const double dt = cfg.strength / cfg.steps;
  long long net_roll = 0;
  for (int t = cfg.steps; t >= 1; --t) {
    const StepInfo step{t, cfg.steps, cfg.strength * t / cfg.steps, dt};
    const Latent v = denoiser(z, step, c);
    if (!v.same_shape(z))
      fail(ErrorCode::Contract, "denoiser returned " + v.shape_string() + " for latent " + z.shape_string());
    for (std::size_t i = 0; i < z.size(); ++i)
      z.values()[i] += dt * v.values()[i];
    if (t > cfg.steps - shift_steps) {
      z = cyclic_roll(z, cfg.shift);
      c = cyclic_roll(c, cfg.shift);
      net_roll += cfg.shift;
    }
  }
  if (net_roll != 0)
    z = cyclic_roll(z, -positive_mod(net_roll, z.width()));
  if (b > 0)
    z = crop_width(blend_boundary(z, b), w);
  return z;
}

double seam_discontinuity(const Latent &z) {
  require(z.width() >= 2, ErrorCode::InvalidArgument, "seam metric needs width >= 2");
  double sum = 0.0;
  for (int c = 0; c < z.channels(); ++c)
    for (int y = 0; y < z.height(); ++y)
      sum += std::abs(z.at(c, y, z.width() - 1) - z.at(c, y, 0));
  return sum / (static_cast<double>(z.channels()) * z.height());
}

double seam_discontinuity(const Image &img) { return seam_discontinuity(to_latent(img)); }

} // namespace panoedit::seam
