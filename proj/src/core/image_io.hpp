// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "core/grid.hpp"

namespace panoedit::io {

double srgb_to_linear(double v) noexcept;
double linear_to_srgb(double v) noexcept;

/// 8-bit PNG. Color channels are decoded from sRGB to linear floats; an
/// alpha channel is kept linear. Gray, gray+alpha, RGB and RGBA load with
/// 1, 2, 3 and 4 channels.
Image load_png(const std::filesystem::path &path);
void save_png(const Image &image, const std::filesystem::path &path);

/// Portable FloatMap, little-endian float32, rows stored bottom-to-top.
/// One- and three-channel images use "Pf" / "PF". Any other channel count
/// is written as a "Pf" map of height C*H holding the channel planes top to
/// bottom; load_pfm_planes() reverses that.
Image load_pfm(const std::filesystem::path &path);
void save_pfm(const Image &image, const std::filesystem::path &path);
Image load_pfm_planes(const std::filesystem::path &path, int channels);

/// Dispatch on extension (.png / .pfm).
Image load_image(const std::filesystem::path &path);
void save_image(const Image &image, const std::filesystem::path &path);

} // namespace panoedit::io
