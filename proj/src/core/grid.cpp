// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include "core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace panoedit {

namespace {

std::size_t checked_count(int a, int b, int c) {
  require(a > 0 && b > 0 && c > 0, ErrorCode::Shape, "grid dimensions must be positive");
  return static_cast<std::size_t>(a) * static_cast<std::size_t>(b) * static_cast<std::size_t>(c);
}

} // namespace

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels),
      data_(checked_count(width, height, channels), fill) {}

std::string Image::shape_string() const {
  return std::to_string(width_) + "x" + std::to_string(height_) + "x" + std::to_string(channels_);
}

Image Image::channel(int c) const {
  require(c >= 0 && c < channels_, ErrorCode::InvalidArgument, "channel index out of range");
  Image out(width_, height_, 1);
  for (int row = 0; row < height_; ++row)
    for (int col = 0; col < width_; ++col)
      out.at(col, row) = at(col, row, c);
  return out;
}

Latent::Latent(int channels, int height, int width, double fill)
    : channels_(channels), height_(height), width_(width),
      data_(checked_count(channels, height, width), fill) {}

std::string Latent::shape_string() const {
  return std::to_string(channels_) + "x" + std::to_string(height_) + "x" + std::to_string(width_);
}

Latent to_latent(const Image &image) {
  Latent out(image.channels(), image.height(), image.width());
  for (int c = 0; c < image.channels(); ++c)
    for (int y = 0; y < image.height(); ++y)
      for (int x = 0; x < image.width(); ++x)
        out.at(c, y, x) = image.at(x, y, c);
  return out;
}

Image to_image(const Latent &latent) {
  Image out(latent.width(), latent.height(), latent.channels());
  for (int c = 0; c < latent.channels(); ++c)
    for (int y = 0; y < latent.height(); ++y)
      for (int x = 0; x < latent.width(); ++x)
        out.at(x, y, c) = latent.at(c, y, x);
  return out;
}

Latent concat_channels(std::span<const Latent> blocks) {
  require(!blocks.empty(), ErrorCode::InvalidArgument, "concat of zero blocks");
  int total = 0;
  for (const Latent &b : blocks) {
    if (!b.same_extent(blocks.front()))
      fail(ErrorCode::Shape, "concat extent mismatch: " + b.shape_string() + " vs " +
                                 blocks.front().shape_string());
    total += b.channels();
  }
  Latent out(total, blocks.front().height(), blocks.front().width());
  std::size_t offset = 0;
  for (const Latent &b : blocks) {
    auto src = b.values();
    std::copy(src.begin(), src.end(), out.values().begin() + static_cast<std::ptrdiff_t>(offset));
    offset += src.size();
  }
  return out;
}

Latent slice_channels(const Latent &latent, int first, int count) {
  require(first >= 0 && count > 0 && first + count <= latent.channels(), ErrorCode::InvalidArgument,
          "channel slice out of range");
  Latent out(count, latent.height(), latent.width());
  auto src = latent.values().subspan(latent.index(first, 0, 0), out.size());
  std::copy(src.begin(), src.end(), out.values().begin());
  return out;
}

double psnr(const Image &a, const Image &b, const Image *weight) {
  require(a.same_shape(b), ErrorCode::Shape, "psnr shape mismatch");
  if (weight)
    require(weight->same_extent(a) && weight->channels() == 1, ErrorCode::Shape,
            "psnr weight shape mismatch");
  double sum = 0.0;
  std::size_t n = 0;
  for (int row = 0; row < a.height(); ++row)
    for (int col = 0; col < a.width(); ++col) {
      if (weight && !(weight->at(col, row) > 0.0))
        continue;
      for (int c = 0; c < a.channels(); ++c) {
        const double d = a.at(col, row, c) - b.at(col, row, c);
        sum += d * d;
        ++n;
      }
    }
  require(n > 0, ErrorCode::EmptyRegion, "psnr over empty region");
  const double mse = sum / static_cast<double>(n);
  if (mse == 0.0)
    return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

} // namespace panoedit
