// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include "core/layered_loss.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "core/distortion.hpp"
#include "core/error.hpp"

namespace panoedit::loss {

namespace {

void check_mask_pair(const Image &a, const Image &b) {
  if (a.channels() != 1 || !a.same_shape(b))
    fail(ErrorCode::Shape, "mask shapes disagree: " + a.shape_string() + " vs " + b.shape_string());
}

struct IouSums {
  double inter = 0.0;
  double uni = 0.0;
};

IouSums iou_sums(const Image &pred, const Image &gt) {
  IouSums s;
  auto p = pred.values();
  auto g = gt.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    s.inter += std::min(p[i], g[i]);
    s.uni += std::max(p[i], g[i]);
  }
  return s;
}

double sum_ascending(std::vector<double> v) {
  // Summed in ascending order so the total does not depend on layer indexing.
  std::sort(v.begin(), v.end());
  return std::accumulate(v.begin(), v.end(), 0.0);
}

void check_inputs(const LossInputs &in) {
  if (!in.src.same_shape(in.tgt))
    fail(ErrorCode::Shape, "src " + in.src.shape_string() + " and tgt " + in.tgt.shape_string() + " disagree");
  if (in.targets.size() != in.layers.size())
    fail(ErrorCode::InvalidArgument, "need one shape target per layer");
  for (std::size_t k = 0; k < in.layers.size(); ++k)
    if (!in.layers[k].alpha.same_extent(in.src) || !in.targets[k].mask.same_extent(in.src))
      fail(ErrorCode::Shape, "layer " + std::to_string(k) + " extent does not match the panorama");
}

Image region_for(const LossInputs &in) {
  if (in.region == ReconRegion::FullFrame || in.layers.empty())
    return Image(in.src.width(), in.src.height(), 1, 1.0);
  std::vector<geom::BBox> boxes;
  for (const ObjectLayer &l : in.layers)
    boxes.push_back(l.bbox);
  return region_mask(boxes, in.src.width(), in.src.height());
}

} // namespace

bool ObjectLayer::consistent() const {
  if (!rgb.same_extent(alpha) || alpha.channels() != 1)
    return false;
  for (int row = 0; row < alpha.height(); ++row)
    for (int col = 0; col < alpha.width(); ++col) {
      const double a = alpha.at(col, row);
      if (a != 0.0 && !bbox.contains_pixel(col, row, alpha.width()))
        return false;
      if (a == 0.0)
        for (double v : rgb.pixel(col, row))
          if (v != 0.0)
            return false;
    }
  return true;
}

ShapeTarget ShapeTarget::from_mask(Image mask, AlphaLocation location) {
  require(mask.channels() == 1, ErrorCode::Shape, "shape mask must be single-channel");
  double y = 0.0;
  if (location == AlphaLocation::Centroid) {
    double mass = 0.0, moment = 0.0;
    for (int row = 0; row < mask.height(); ++row)
      for (int col = 0; col < mask.width(); ++col) {
        mass += mask.at(col, row);
        moment += mask.at(col, row) * (row + 0.5);
      }
    require(mass > 0.0, ErrorCode::EmptyMask, "shape mask is empty");
    y = moment / mass;
  } else {
    y = geom::bbox_of_mask(mask, 0.5).center(mask.width()).row;
  }
  const double a = distortion::alpha_at(y, mask.height());
  return {std::move(mask), a};
}

AlphaExtraction extract_alpha_white_bg(const Image &rgb, double whiteness_threshold) {
  const int w = rgb.width();
  const int h = rgb.height();
  const int color = std::min(rgb.channels(), 3);
  auto near_white = [&](int col, int row) {
    double m = rgb.at(col, row, 0);
    for (int c = 1; c < color; ++c)
      m = std::min(m, rgb.at(col, row, c));
    return m >= whiteness_threshold;
  };
  std::vector<char> background(rgb.pixel_count(), 0);
  std::deque<std::pair<int, int>> queue;
  auto seed = [&](int col, int row) {
    const std::size_t i = static_cast<std::size_t>(row) * w + col;
    if (!background[i] && near_white(col, row)) {
      background[i] = 1;
      queue.emplace_back(col, row);
    }
  };
  for (int col = 0; col < w; ++col) {
    seed(col, 0);
    seed(col, h - 1);
  }
  for (int row = 0; row < h; ++row) {
    seed(0, row);
    seed(w - 1, row);
  }
  while (!queue.empty()) {
    const auto [col, row] = queue.front();
    queue.pop_front();
    if (col > 0) seed(col - 1, row);
    if (col + 1 < w) seed(col + 1, row);
    if (row > 0) seed(col, row - 1);
    if (row + 1 < h) seed(col, row + 1);
  }
  AlphaExtraction out{Image(w, h, 1), true};
  for (int row = 0; row < h; ++row)
    for (int col = 0; col < w; ++col)
      if (!background[static_cast<std::size_t>(row) * w + col]) {
        out.mask.at(col, row) = 1.0;
        out.empty = false;
      }
  return out;
}

double soft_iou(const Image &pred, const Image &gt) {
  check_mask_pair(pred, gt);
  const IouSums s = iou_sums(pred, gt);
  if (s.uni == 0.0)
    return 1.0;
  return s.inter / (s.uni + kIouEpsilon);
}

double shape_loss_k(const Image &pred, const ShapeTarget &target) {
  return target.alpha_k * (1.0 - soft_iou(pred, target.mask));
}

Image composite(const Image &src, std::span<const ObjectLayer> layers) {
  Image out = src;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const ObjectLayer &l = layers[k];
    if (!l.rgb.same_shape(src) || !l.alpha.same_extent(src) || l.alpha.channels() != 1)
      fail(ErrorCode::Shape, "layer " + std::to_string(k) + " shape " + l.rgb.shape_string() +
                                 " does not match source " + src.shape_string());
    for (int row = 0; row < src.height(); ++row)
      for (int col = 0; col < src.width(); ++col) {
        const double a = l.alpha.at(col, row);
        auto px = out.pixel(col, row);
        auto fg = l.rgb.pixel(col, row);
        for (std::size_t c = 0; c < px.size(); ++c)
          px[c] = a * fg[c] + (1.0 - a) * px[c];
      }
  }
  return out;
}

Image region_mask(std::span<const geom::BBox> boxes, int width, int height) {
  Image region(width, height, 1);
  for (const geom::BBox &b : boxes)
    for (int row = 0; row < height; ++row)
      for (int col = 0; col < width; ++col)
        if (b.contains_pixel(col, row, width))
          region.at(col, row) = 1.0;
  return region;
}

double recon_loss(const Image &comp, const Image &tgt, const Image &region) {
  if (!comp.same_shape(tgt) || !region.same_extent(comp) || region.channels() != 1)
    fail(ErrorCode::Shape, "recon_loss shapes disagree");
  double sum = 0.0;
  std::size_t n = 0;
  for (int row = 0; row < comp.height(); ++row)
    for (int col = 0; col < comp.width(); ++col) {
      if (!(region.at(col, row) > 0.0))
        continue;
      for (int c = 0; c < comp.channels(); ++c) {
        const double d = comp.at(col, row, c) - tgt.at(col, row, c);
        sum += d * d;
      }
      n += static_cast<std::size_t>(comp.channels());
    }
  require(n > 0, ErrorCode::EmptyRegion, "reconstruction region is empty");
  return sum / static_cast<double>(n);
}

LossReport total_shape_loss(const LossInputs &in) {
  check_inputs(in);
  LossReport report;
  report.no_layers = in.layers.empty();
  for (std::size_t k = 0; k < in.layers.size(); ++k)
    report.shape_losses.push_back(shape_loss_k(in.layers[k].alpha, in.targets[k]));
  report.recon = recon_loss(composite(in.src, in.layers), in.tgt, region_for(in));
  const double mean_shape =
      report.no_layers ? 0.0 : sum_ascending(report.shape_losses) / static_cast<double>(in.layers.size());
  report.total = mean_shape + report.recon;
  return report;
}

LossGradients loss_gradients(const LossInputs &in) {
  check_inputs(in);
  const std::size_t K = in.layers.size();
  LossGradients g;
  if (K == 0)
    return g;
  const int w = in.src.width(), h = in.src.height(), C = in.src.channels();

  // Shape term: -(alpha_k / K) * dIoU/dp.
  for (std::size_t k = 0; k < K; ++k) {
    const Image &p = in.layers[k].alpha;
    const Image &gt = in.targets[k].mask;
    check_mask_pair(p, gt);
    const IouSums s = iou_sums(p, gt);
    const double u = s.uni + kIouEpsilon;
    const double scale = -in.targets[k].alpha_k / static_cast<double>(K);
    Image d(w, h, 1);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double pv = p.values()[i], gv = gt.values()[i];
      double di = 0.0, du = 0.0;
      if (pv < gv) {
        di = 1.0;
      } else if (pv > gv) {
        du = 1.0;
      } else {
        di = du = 0.5;
        ++g.tie_points;
      }
      d.values()[i] = s.uni == 0.0 ? 0.0 : scale * (di * u - s.inter * du) / (u * u);
    }
    g.d_shape_mask.push_back(std::move(d));
  }

  // Recon term: back-propagate through the over operator.
  std::vector<Image> under; // under[k] = composite of src and layers < k
  under.push_back(in.src);
  for (std::size_t k = 0; k < K; ++k)
    under.push_back(composite(under.back(), std::span<const ObjectLayer>(&in.layers[k], 1)));
  const Image region = region_for(in);
  std::size_t count = 0;
  for (double r : region.values())
    if (r > 0.0)
      count += static_cast<std::size_t>(C);
  require(count > 0, ErrorCode::EmptyRegion, "reconstruction region is empty");
  Image grad(w, h, C);
  const Image &out = under.back();
  for (int row = 0; row < h; ++row)
    for (int col = 0; col < w; ++col)
      if (region.at(col, row) > 0.0)
        for (int c = 0; c < C; ++c)
          grad.at(col, row, c) = 2.0 * (out.at(col, row, c) - in.tgt.at(col, row, c)) / static_cast<double>(count);

  g.d_alpha.resize(K);
  g.d_rgb.resize(K);
  for (std::size_t kk = K; kk-- > 0;) {
    const ObjectLayer &l = in.layers[kk];
    const Image &below = under[kk];
    Image d_alpha = g.d_shape_mask[kk];
    Image d_rgb(w, h, C);
    for (int row = 0; row < h; ++row)
      for (int col = 0; col < w; ++col) {
        const double a = l.alpha.at(col, row);
        double acc = 0.0;
        for (int c = 0; c < C; ++c) {
          const double gc = grad.at(col, row, c);
          d_rgb.at(col, row, c) = gc * a;
          acc += gc * (l.rgb.at(col, row, c) - below.at(col, row, c));
          grad.at(col, row, c) = gc * (1.0 - a);
        }
        d_alpha.at(col, row) += acc;
      }
    g.d_alpha[kk] = std::move(d_alpha);
    g.d_rgb[kk] = std::move(d_rgb);
  }
  return g;
}

GradCheckResult finite_difference_check(const LossInputs &inputs, double step) {
  const LossGradients analytic = loss_gradients(inputs);
  LossInputs probe = inputs;
  GradCheckResult res;
  auto compare = [&](double a, double &slot) {
    const double saved = slot;
    slot = saved + step;
    const double up = total_shape_loss(probe).total;
    slot = saved - step;
    const double down = total_shape_loss(probe).total;
    slot = saved;
    const double fd = (up - down) / (2.0 * step);
    const double denom = std::max({std::abs(a), std::abs(fd), 1e-6});
    res.max_rel_error = std::max(res.max_rel_error, std::abs(a - fd) / denom);
    ++res.checked;
  };
  for (std::size_t k = 0; k < probe.layers.size(); ++k) {
    auto alpha = probe.layers[k].alpha.values();
    auto gt = probe.targets[k].mask.values();
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (std::abs(alpha[i] - gt[i]) <= step) {
        ++res.skipped_kinks;
        continue;
      }
      compare(analytic.d_alpha[k].values()[i], alpha[i]);
    }
    auto rgb = probe.layers[k].rgb.values();
    for (std::size_t i = 0; i < rgb.size(); ++i)
      compare(analytic.d_rgb[k].values()[i], rgb[i]);
  }
  return res;
}

} // namespace panoedit::loss
