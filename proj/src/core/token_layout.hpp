// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/grid.hpp"

namespace panoedit::layout {

enum class DownsampleMode { MaxPool, AverageThreshold };

/// Image-resolution mask to a 1 x (H/f) x (W/f) latent mask.
Latent downsample_mask(const Image &mask, int factor, DownsampleMode mode = DownsampleMode::MaxPool,
                       double threshold = 0.5);

enum class BlockKind { Noisy, Context, Mask };

struct BlockSpan {
  std::string name;
  int offset = 0;
  int length = 0;
  int layer_id = 0;
  BlockKind kind = BlockKind::Context;

  friend bool operator==(const BlockSpan &, const BlockSpan &) = default;
};

struct NamedBlock {
  std::string name;
  BlockKind kind;
  Latent value;
};

/// Channel-concatenated conditioning input with its manifest. The manifest
/// spans partition the channel axis in block order.
class ConditioningBundle {
public:
  static ConditioningBundle assemble(std::vector<NamedBlock> blocks, int layer_id);

  const Latent &tensor() const noexcept { return tensor_; }
  const std::vector<BlockSpan> &manifest() const noexcept { return manifest_; }
  int layer_id() const noexcept { return layer_id_; }

  const BlockSpan &span(const std::string &name) const;
  Latent block(const std::string &name) const;
  std::vector<Latent> split() const;

  /// One "name offset length layer_id" line per block.
  std::string manifest_text() const;

private:
  Latent tensor_;
  std::vector<BlockSpan> manifest_;
  int layer_id_ = 0;
};

/// Blocks (z_t, z_con, m) with z_con = z_0 * (1 - m).
ConditioningBundle build_stage1_input(const Latent &z_t, const Latent &z_0, const Latent &m);

struct Stage2Inputs {
  Latent z_tgt_t;
  Latent z_src;
  std::vector<Latent> layer_latents; // noisy z_t^k
  std::vector<Latent> ref_latents;   // z_ref^k
  std::vector<Latent> box_masks;     // m_box^k, one channel each
};

/// Elementwise max of the box masks.
Latent union_mask(std::span<const Latent> masks);

/// Global bundle (layer_id 0) followed by one bundle per layer (layer_id k).
std::vector<ConditioningBundle> build_stage2_inputs(const Stage2Inputs &in);

struct DropoutRates {
  double context = 0.0; // dropped context latents become zeros
  double mask = 0.0;    // dropped masks become all-ones
};

/// Independent Bernoulli drop per Context / Mask block, seeded by
/// (seed, block index). Noisy blocks are never dropped.
ConditioningBundle apply_conditioning_dropout(const ConditioningBundle &bundle, const DropoutRates &rates,
                                              std::uint64_t seed);

struct TokenPosition {
  int layer_id = 0; // 0 is the global canvas
  double y = 0.0;
  double x = 0.0;
};

struct RopeSplit {
  int layer = 0;
  int y = 0;
  int x = 0;

  int total() const noexcept { return layer + y + x; }
  /// (d/4, 3d/8, 3d/8) rounded to even sizes.
  static RopeSplit default_for(int dim);
};

inline constexpr double kRopeBase = 10000.0;

/// Rotates consecutive pairs of each axis block by position * base^(-2i/d_axis).
std::vector<double> rope3d_apply(std::span<const double> vec, const TokenPosition &pos, const RopeSplit &split,
                                 double base = kRopeBase);

} // namespace panoedit::layout
