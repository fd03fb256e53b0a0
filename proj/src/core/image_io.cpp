// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include "core/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace panoedit::io {

namespace {

std::string lower_extension(const std::filesystem::path &path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

bool has_alpha(int channels) { return channels == 2 || channels == 4; }

float to_le(float v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    bits = __builtin_bswap32(bits);
    std::memcpy(&v, &bits, sizeof bits);
    return v;
  }
}

void write_pfm(const std::filesystem::path &path, int width, int height, bool color,
               const std::vector<float> &top_down) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << (color ? "PF" : "Pf") << "\n" << width << " " << height << "\n-1.0\n";
  const int per_pixel = color ? 3 : 1;
  const std::size_t row_len = static_cast<std::size_t>(width) * per_pixel;
  std::vector<float> row(row_len);
  for (int r = height - 1; r >= 0; --r) {
    for (std::size_t k = 0; k < row_len; ++k)
      row[k] = to_le(top_down[static_cast<std::size_t>(r) * row_len + k]);
    out.write(reinterpret_cast<const char *>(row.data()), static_cast<std::streamsize>(row_len * sizeof(float)));
  }
  if (!out)
    fail(ErrorCode::Io, "write failed for " + path.string());
}

} // namespace

double srgb_to_linear(double v) noexcept {
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double v) noexcept {
  v = std::clamp(v, 0.0, 1.0);
  return v <= 0.0031308 ? v * 12.92 : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

Image load_png(const std::filesystem::path &path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.string().c_str()))
    fail(ErrorCode::Io, "cannot read PNG " + path.string() + ": " + png.message);
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  const bool alpha = (png.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  const int channels = (color ? 3 : 1) + (alpha ? 1 : 0);
  png.format = color ? (alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB) : (alpha ? PNG_FORMAT_GA : PNG_FORMAT_GRAY);
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    fail(ErrorCode::Io, "cannot decode PNG " + path.string() + ": " + msg);
  }
  Image img(static_cast<int>(png.width), static_cast<int>(png.height), channels);
  const int color_channels = alpha ? channels - 1 : channels;
  auto values = img.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int c = static_cast<int>(i % static_cast<std::size_t>(channels));
    const double v = buffer[i] / 255.0;
    values[i] = c < color_channels ? srgb_to_linear(v) : v;
  }
  return img;
}

void save_png(const Image &image, const std::filesystem::path &path) {
  const int channels = image.channels();
  require(channels >= 1 && channels <= 4, ErrorCode::InvalidArgument, "PNG supports 1 to 4 channels");
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width());
  png.height = static_cast<png_uint_32>(image.height());
  png.format = channels == 1 ? PNG_FORMAT_GRAY
               : channels == 2 ? PNG_FORMAT_GA
               : channels == 3 ? PNG_FORMAT_RGB
                               : PNG_FORMAT_RGBA;
  const int color_channels = has_alpha(channels) ? channels - 1 : channels;
  std::vector<png_byte> buffer(image.size());
  auto values = image.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int c = static_cast<int>(i % static_cast<std::size_t>(channels));
    const double v = c < color_channels ? linear_to_srgb(values[i]) : std::clamp(values[i], 0.0, 1.0);
    buffer[i] = static_cast<png_byte>(std::lround(v * 255.0));
  }
  if (!png_image_write_to_file(&png, path.string().c_str(), 0, buffer.data(), 0, nullptr))
    fail(ErrorCode::Io, "cannot write PNG " + path.string() + ": " + png.message);
}

Image load_pfm(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::Io, "cannot open " + path.string());
  std::string magic;
  int width = 0, height = 0;
  double scale = 0.0;
  in >> magic >> width >> height >> scale;
  if (!in || (magic != "PF" && magic != "Pf") || width <= 0 || height <= 0 || scale == 0.0)
    fail(ErrorCode::Parse, "malformed PFM header in " + path.string());
  in.get(); // single whitespace before the raster
  const int channels = magic == "PF" ? 3 : 1;
  const bool little = scale < 0.0;
  const std::size_t row_len = static_cast<std::size_t>(width) * channels;
  std::vector<float> row(row_len);
  Image img(width, height, channels);
  for (int r = height - 1; r >= 0; --r) {
    in.read(reinterpret_cast<char *>(row.data()), static_cast<std::streamsize>(row_len * sizeof(float)));
    if (!in)
      fail(ErrorCode::Parse, "truncated PFM raster in " + path.string());
    for (std::size_t k = 0; k < row_len; ++k) {
      float v = row[k];
      if (little != (std::endian::native == std::endian::little)) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        bits = __builtin_bswap32(bits);
        std::memcpy(&v, &bits, sizeof bits);
      }
      img.values()[static_cast<std::size_t>(r) * row_len + k] = v;
    }
  }
  return img;
}

void save_pfm(const Image &image, const std::filesystem::path &path) {
  const int channels = image.channels();
  if (channels == 1 || channels == 3) {
    std::vector<float> data(image.size());
    std::transform(image.values().begin(), image.values().end(), data.begin(),
                   [](double v) { return static_cast<float>(v); });
    write_pfm(path, image.width(), image.height(), channels == 3, data);
    return;
  }
  std::vector<float> planes(image.size());
  std::size_t k = 0;
  for (int c = 0; c < channels; ++c)
    for (int row = 0; row < image.height(); ++row)
      for (int col = 0; col < image.width(); ++col)
        planes[k++] = static_cast<float>(image.at(col, row, c));
  write_pfm(path, image.width(), image.height() * channels, false, planes);
}

Image load_pfm_planes(const std::filesystem::path &path, int channels) {
  Image stacked = load_pfm(path);
  if (channels == stacked.channels())
    return stacked;
  if (stacked.channels() != 1 || channels <= 0 || stacked.height() % channels != 0)
    fail(ErrorCode::Shape, "PFM " + path.string() + " cannot be split into " + std::to_string(channels) +
                               " planes");
  const int h = stacked.height() / channels;
  Image img(stacked.width(), h, channels);
  for (int c = 0; c < channels; ++c)
    for (int row = 0; row < h; ++row)
      for (int col = 0; col < img.width(); ++col)
        img.at(col, row, c) = stacked.at(col, c * h + row);
  return img;
}

Image load_image(const std::filesystem::path &path) {
  if (!std::filesystem::exists(path))
    fail(ErrorCode::Io, "input file not found: " + path.string());
  const std::string ext = lower_extension(path);
  if (ext == ".png")
    return load_png(path);
  if (ext == ".pfm")
    return load_pfm(path);
  fail(ErrorCode::InvalidArgument, "unsupported image extension '" + ext + "' for " + path.string());
}

void save_image(const Image &image, const std::filesystem::path &path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png")
    return save_png(image, path);
  if (ext == ".pfm")
    return save_pfm(image, path);
  fail(ErrorCode::InvalidArgument, "unsupported image extension '" + ext + "' for " + path.string());
}

} // namespace panoedit::io
