// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace panoedit {

/// Dense row-major H x W x C grid of doubles with interleaved channels.
///
/// Used for ERP panoramas, perspective views, masks (C = 1) and attention
/// maps. Pixel (col, row) has its center at continuous coordinate
/// (col + 0.5, row + 0.5).
class Image {
public:
  Image() = default;
  Image(int width, int height, int channels, double fill = 0.0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool empty() const noexcept { return data_.empty(); }

  std::size_t index(int col, int row, int c = 0) const noexcept {
    return (static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(col)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }
  double &at(int col, int row, int c = 0) noexcept { return data_[index(col, row, c)]; }
  double at(int col, int row, int c = 0) const noexcept { return data_[index(col, row, c)]; }

  std::span<double> pixel(int col, int row) noexcept {
    return {data_.data() + index(col, row), static_cast<std::size_t>(channels_)};
  }
  std::span<const double> pixel(int col, int row) const noexcept {
    return {data_.data() + index(col, row), static_cast<std::size_t>(channels_)};
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool same_shape(const Image &other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }
  bool same_extent(const Image &other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }
  std::string shape_string() const;

  /// Single channel `c` as a one-channel image.
  Image channel(int c) const;

  friend bool operator==(const Image &, const Image &) = default;

private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// C x h x w planar tensor standing in for VAE latents and noise fields.
class Latent {
public:
  Latent() = default;
  Latent(int channels, int height, int width, double fill = 0.0);

  int channels() const noexcept { return channels_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t plane_size() const noexcept {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }

  std::size_t index(int c, int y, int x) const noexcept {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(height_) +
            static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }
  double &at(int c, int y, int x) noexcept { return data_[index(c, y, x)]; }
  double at(int c, int y, int x) const noexcept { return data_[index(c, y, x)]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  std::span<double> plane(int c) noexcept {
    return {data_.data() + index(c, 0, 0), plane_size()};
  }
  std::span<const double> plane(int c) const noexcept {
    return {data_.data() + index(c, 0, 0), plane_size()};
  }

  bool same_shape(const Latent &other) const noexcept {
    return channels_ == other.channels_ && height_ == other.height_ && width_ == other.width_;
  }
  bool same_extent(const Latent &other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }
  std::string shape_string() const;

  friend bool operator==(const Latent &, const Latent &) = default;

private:
  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

Latent to_latent(const Image &image);
Image to_image(const Latent &latent);

/// Channel-wise concatenation; all blocks must share (h, w).
Latent concat_channels(std::span<const Latent> blocks);
/// Channels [first, first + count).
Latent slice_channels(const Latent &latent, int first, int count);

/// Peak-signal-to-noise ratio in dB with peak 1, over pixels where `weight`
/// (single channel, may be empty for all pixels) is positive.
double psnr(const Image &a, const Image &b, const Image *weight = nullptr);

} // namespace panoedit
