// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "core/grid.hpp"
#include "core/sphere_geom.hpp"

namespace panoedit::loss {

inline constexpr double kIouEpsilon = 1e-8;
inline constexpr double kDefaultWhiteness = 0.98;

/// Transparent object layer: RGB plus alpha, which doubles as the
/// predicted shape mask of the object.
struct ObjectLayer {
  Image rgb;   // W x H x C
  Image alpha; // W x H x 1, in [0, 1]
  geom::BBox bbox;

  /// Checks alpha is zero outside bbox and rgb is zero where alpha is.
  bool consistent() const;
};

enum class AlphaLocation { Centroid, BBoxCenter };

struct ShapeTarget {
  Image mask;          // ground-truth shape mask, W x H x 1
  double alpha_k = 0.; // latitude weight alpha(y)

  static ShapeTarget from_mask(Image mask, AlphaLocation location = AlphaLocation::Centroid);
};

struct AlphaExtraction {
  Image mask;
  bool empty = false;
};

/// Alpha of an object rendered on white: the complement of the
/// border-connected near-white region (min channel >= threshold,
/// 4-connectivity).
AlphaExtraction extract_alpha_white_bg(const Image &rgb, double whiteness_threshold = kDefaultWhiteness);

/// sum(min(p, g)) / (sum(max(p, g)) + eps); 1 when both masks are empty.
double soft_iou(const Image &pred, const Image &gt);

double shape_loss_k(const Image &pred, const ShapeTarget &target);

/// Over-composites layers in order onto src.
Image composite(const Image &src, std::span<const ObjectLayer> layers);

enum class ReconRegion { BoxUnion, FullFrame };

Image region_mask(std::span<const geom::BBox> boxes, int width, int height);

/// Mean squared error over region pixels (single-channel weights > 0),
/// averaged over region pixels times channels.
double recon_loss(const Image &comp, const Image &tgt, const Image &region);

struct LossInputs {
  Image src;
  Image tgt;
  std::vector<ObjectLayer> layers;
  std::vector<ShapeTarget> targets; // parallel to layers
  ReconRegion region = ReconRegion::BoxUnion;
};

struct LossReport {
  std::vector<double> shape_losses;
  double recon = 0.0;
  double total = 0.0;
  bool no_layers = false; // K = 0: total is recon over the full frame
};

LossReport total_shape_loss(const LossInputs &inputs);

struct LossGradients {
  std::vector<Image> d_alpha;      // d total / d alpha_k (shape + recon)
  std::vector<Image> d_rgb;        // d total / d rgb_k
  std::vector<Image> d_shape_mask; // d (mean shape term) / d M_pred,k
  std::size_t tie_points = 0;      // pixels where pred == gt (subgradient used)
  bool subgradient() const noexcept { return tie_points > 0; }
};

LossGradients loss_gradients(const LossInputs &inputs);

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped_kinks = 0;
};

/// Compares loss_gradients() with central differences of
/// total_shape_loss() on every alpha and rgb entry; entries within `step`
/// of a min/max kink are skipped.
GradCheckResult finite_difference_check(const LossInputs &inputs, double step = 1e-4);

} // namespace panoedit::loss
