// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include "core/token_layout.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"
#include "core/philox.hpp"

namespace panoedit::layout {

namespace {

constexpr std::uint64_t kDropoutStream = 0x6c61796f7574ull;

void require_extent(const Latent &a, const Latent &b, const char *what) {
  if (!a.same_extent(b))
    fail(ErrorCode::Shape, std::string(what) + ": " + a.shape_string() + " vs " + b.shape_string());
}

Latent masked_context(const Latent &z, const Latent &m) {
  require(m.channels() == 1, ErrorCode::Shape, "mask latent must have one channel");
  require_extent(z, m, "context / mask extent mismatch");
  Latent out = z;
  for (int c = 0; c < z.channels(); ++c)
    for (int y = 0; y < z.height(); ++y)
      for (int x = 0; x < z.width(); ++x)
        out.at(c, y, x) = z.at(c, y, x) * (1.0 - m.at(0, y, x));
  return out;
}

int round_even(double v) { return 2 * static_cast<int>(std::lround(v / 2.0)); }

} // namespace

Latent downsample_mask(const Image &mask, int factor, DownsampleMode mode, double threshold) {
  require(mask.channels() == 1, ErrorCode::Shape, "mask must be single-channel");
  require(factor >= 1, ErrorCode::InvalidArgument, "downsample factor must be >= 1");
  if (mask.width() % factor != 0 || mask.height() % factor != 0)
    fail(ErrorCode::Shape, "mask " + mask.shape_string() + " not divisible by factor " + std::to_string(factor));
  const int h = mask.height() / factor, w = mask.width() / factor;
  Latent out(1, h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double mx = 0.0, sum = 0.0;
      for (int dy = 0; dy < factor; ++dy)
        for (int dx = 0; dx < factor; ++dx) {
          const double v = mask.at(x * factor + dx, y * factor + dy);
          mx = std::max(mx, v);
          sum += v;
        }
      out.at(0, y, x) = mode == DownsampleMode::MaxPool
                            ? mx
                            : (sum / (factor * factor) >= threshold ? 1.0 : 0.0);
    }
  return out;
}

ConditioningBundle ConditioningBundle::assemble(std::vector<NamedBlock> blocks, int layer_id) {
  require(!blocks.empty(), ErrorCode::InvalidArgument, "bundle needs at least one block");
  ConditioningBundle b;
  b.layer_id_ = layer_id;
  std::vector<Latent> values;
  int offset = 0;
  for (NamedBlock &nb : blocks) {
    b.manifest_.push_back({nb.name, offset, nb.value.channels(), layer_id, nb.kind});
    offset += nb.value.channels();
    values.push_back(std::move(nb.value));
  }
  b.tensor_ = concat_channels(values);
  return b;
}

const BlockSpan &ConditioningBundle::span(const std::string &name) const {
  for (const BlockSpan &s : manifest_)
    if (s.name == name)
      return s;
  fail(ErrorCode::InvalidArgument, "no block named '" + name + "'");
}

Latent ConditioningBundle::block(const std::string &name) const {
  const BlockSpan &s = span(name);
  return slice_channels(tensor_, s.offset, s.length);
}

std::vector<Latent> ConditioningBundle::split() const {
  std::vector<Latent> out;
  for (const BlockSpan &s : manifest_)
    out.push_back(slice_channels(tensor_, s.offset, s.length));
  return out;
}

std::string ConditioningBundle::manifest_text() const {
  std::ostringstream os;
  for (const BlockSpan &s : manifest_)
    os << s.name << ' ' << s.offset << ' ' << s.length << ' ' << s.layer_id << '\n';
  return os.str();
}

ConditioningBundle build_stage1_input(const Latent &z_t, const Latent &z_0, const Latent &m) {
  if (!z_t.same_shape(z_0))
    fail(ErrorCode::Shape, "z_t " + z_t.shape_string() + " and z_0 " + z_0.shape_string() + " disagree");
  std::vector<NamedBlock> blocks;
  blocks.push_back({"z_t", BlockKind::Noisy, z_t});
  blocks.push_back({"z_con", BlockKind::Context, masked_context(z_0, m)});
  blocks.push_back({"m", BlockKind::Mask, m});
  return ConditioningBundle::assemble(std::move(blocks), 0);
}

Latent union_mask(std::span<const Latent> masks) {
  require(!masks.empty(), ErrorCode::InvalidArgument, "union of zero masks");
  Latent out = masks.front();
  require(out.channels() == 1, ErrorCode::Shape, "box masks must have one channel");
  for (const Latent &m : masks.subspan(1)) {
    if (!m.same_shape(out))
      fail(ErrorCode::Shape, "box mask " + m.shape_string() + " vs " + out.shape_string());
    for (std::size_t i = 0; i < out.size(); ++i)
      out.values()[i] = std::max(out.values()[i], m.values()[i]);
  }
  return out;
}

std::vector<ConditioningBundle> build_stage2_inputs(const Stage2Inputs &in) {
  const std::size_t K = in.layer_latents.size();
  require(K >= 1, ErrorCode::InvalidArgument, "stage-2 input needs at least one layer");
  require(in.ref_latents.size() == K && in.box_masks.size() == K, ErrorCode::InvalidArgument,
          "layer, reference and box-mask counts differ");
  if (!in.z_tgt_t.same_shape(in.z_src))
    fail(ErrorCode::Shape, "z_t^tgt " + in.z_tgt_t.shape_string() + " and z_src " + in.z_src.shape_string() +
                               " disagree");
  const Latent m_union = union_mask(in.box_masks);

  std::vector<ConditioningBundle> bundles;
  bundles.push_back(ConditioningBundle::assemble({{"z_t_tgt", BlockKind::Noisy, in.z_tgt_t},
                                                  {"z_src_vis", BlockKind::Context, masked_context(in.z_src, m_union)},
                                                  {"m_union", BlockKind::Mask, m_union}},
                                                 0));
  for (std::size_t k = 0; k < K; ++k) {
    require_extent(in.layer_latents[k], in.z_tgt_t, "layer latent extent mismatch");
    require_extent(in.ref_latents[k], in.z_tgt_t, "reference latent extent mismatch");
    const std::string suffix = "_" + std::to_string(k + 1);
    bundles.push_back(ConditioningBundle::assemble({{"z_t" + suffix, BlockKind::Noisy, in.layer_latents[k]},
                                                    {"z_ref" + suffix, BlockKind::Context, in.ref_latents[k]},
                                                    {"m_box" + suffix, BlockKind::Mask, in.box_masks[k]}},
                                                   static_cast<int>(k + 1)));
  }
  return bundles;
}

ConditioningBundle apply_conditioning_dropout(const ConditioningBundle &bundle, const DropoutRates &rates,
                                              std::uint64_t seed) {
  std::vector<NamedBlock> blocks;
  for (std::size_t i = 0; i < bundle.manifest().size(); ++i) {
    const BlockSpan &s = bundle.manifest()[i];
    Latent value = slice_channels(bundle.tensor(), s.offset, s.length);
    const PhiloxBlock draw = philox_block(seed, kDropoutStream + static_cast<std::uint64_t>(bundle.layer_id()), i);
    const double u = uniform_from_words(draw[0], draw[1]);
    if (s.kind == BlockKind::Context && u < rates.context)
      std::fill(value.values().begin(), value.values().end(), 0.0);
    else if (s.kind == BlockKind::Mask && u < rates.mask)
      std::fill(value.values().begin(), value.values().end(), 1.0);
    blocks.push_back({s.name, s.kind, std::move(value)});
  }
  return ConditioningBundle::assemble(std::move(blocks), bundle.layer_id());
}

RopeSplit RopeSplit::default_for(int dim) {
  require(dim > 0 && dim % 2 == 0, ErrorCode::InvalidArgument, "rope dimension must be positive and even");
  RopeSplit s;
  s.layer = round_even(dim / 4.0);
  s.y = round_even(3.0 * dim / 8.0);
  s.x = dim - s.layer - s.y;
  return s;
}

std::vector<double> rope3d_apply(std::span<const double> vec, const TokenPosition &pos, const RopeSplit &split,
                                 double base) {
  if (split.layer % 2 || split.y % 2 || split.x % 2 || split.layer < 0 || split.y < 0 || split.x < 0)
    fail(ErrorCode::InvalidArgument, "rope sub-dimensions must be even and non-negative");
  if (static_cast<std::size_t>(split.total()) != vec.size())
    fail(ErrorCode::Shape, "rope split " + std::to_string(split.total()) + " does not match vector length " +
                               std::to_string(vec.size()));
  std::vector<double> out(vec.begin(), vec.end());
  const struct {
    int dim;
    double position;
  } axes[3] = {{split.layer, static_cast<double>(pos.layer_id)}, {split.y, pos.y}, {split.x, pos.x}};
  std::size_t offset = 0;
  for (const auto &axis : axes) {
    for (int i = 0; i < axis.dim / 2; ++i) {
      const double freq = std::pow(base, -2.0 * i / axis.dim);
      const double angle = axis.position * freq;
      const double c = std::cos(angle), s = std::sin(angle);
      const std::size_t j = offset + 2 * static_cast<std::size_t>(i);
      const double a = vec[j], b = vec[j + 1];
      out[j] = a * c - b * s;
      out[j + 1] = a * s + b * c;
    }
    offset += static_cast<std::size_t>(axis.dim);
  }
  return out;
}

} // namespace panoedit::layout
