// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "core/error.hpp"
#include "core/image_io.hpp"

using namespace panoedit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / "panoedit_unit_io";
  fs::create_directories(dir);
  return dir / name;
}

Image random_image(int w, int h, int c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Image img(w, h, c);
  for (auto &v : img.values())
    v = u(rng);
  return img;
}

} // namespace

TEST_SUITE("image_io") {

TEST_CASE("sRGB transfer is an inverse pair") {
  CHECK(io::srgb_to_linear(0.0) == 0.0);
  CHECK(io::srgb_to_linear(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(io::srgb_to_linear(0.04045) == doctest::Approx(0.04045 / 12.92));
  CHECK(io::srgb_to_linear(0.5) == doctest::Approx(0.21404114).epsilon(1e-7));
  for (int k = 0; k <= 255; ++k) {
    const double s = k / 255.0;
    CHECK(io::linear_to_srgb(io::srgb_to_linear(s)) == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("PNG round trip is exact on representable values") {
  for (int channels : {1, 2, 3, 4}) {
    Image img(9, 5, channels);
    std::mt19937_64 rng(channels);
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 9; ++c)
        for (int k = 0; k < channels; ++k) {
          const double code = static_cast<double>(rng() % 256) / 255.0;
          const bool alpha = (channels == 2 && k == 1) || (channels == 4 && k == 3);
          img.at(c, r, k) = alpha ? code : io::srgb_to_linear(code);
        }
    const auto path = scratch("rt" + std::to_string(channels) + ".png");
    io::save_png(img, path);
    const Image back = io::load_png(path);
    REQUIRE(back.same_shape(img));
    for (std::size_t i = 0; i < img.size(); ++i)
      CHECK(back.values()[i] == doctest::Approx(img.values()[i]).epsilon(1e-12));
  }
}

TEST_CASE("PNG quantization error is bounded") {
  const Image img = random_image(16, 8, 3, 2);
  const auto path = scratch("quant.png");
  io::save_image(img, path);
  const Image back = io::load_image(path);
  for (std::size_t i = 0; i < img.size(); ++i)
    CHECK(std::abs(io::linear_to_srgb(back.values()[i]) - io::linear_to_srgb(img.values()[i])) <= 0.5 / 255 + 1e-12);
}

TEST_CASE("PFM round trip is float exact") {
  for (int channels : {1, 3}) {
    Image img = random_image(7, 4, channels, 10 + channels);
    for (auto &v : img.values())
      v = static_cast<float>(v * 8.0 - 4.0);
    const auto path = scratch("rt" + std::to_string(channels) + ".pfm");
    io::save_pfm(img, path);
    CHECK(io::load_pfm(path) == img);
    CHECK(io::load_image(path) == img);
  }
}

TEST_CASE("PFM stores other channel counts as planes") {
  Image img = random_image(6, 3, 4, 7);
  for (auto &v : img.values())
    v = static_cast<float>(v);
  const auto path = scratch("planes.pfm");
  io::save_pfm(img, path);
  const Image flat = io::load_pfm(path);
  CHECK(flat.width() == 6);
  CHECK(flat.height() == 12);
  CHECK(flat.channels() == 1);
  CHECK(flat.at(2, 3 + 1) == img.at(2, 1, 1));
  CHECK(io::load_pfm_planes(path, 4) == img);
  CHECK_THROWS_AS(io::load_pfm_planes(path, 5), Error);
}

TEST_CASE("malformed PFM is rejected") {
  const auto path = scratch("bad.pfm");
  {
    std::ofstream f(path, std::ios::binary);
    f << "PX\n2 2\n-1.0\n";
  }
  CHECK_THROWS_AS(io::load_pfm(path), Error);
  {
    std::ofstream f(path, std::ios::binary);
    f << "Pf\n2 2\n-1.0\n";
    const float v = 1.0f;
    f.write(reinterpret_cast<const char *>(&v), sizeof v);
  }
  try {
    io::load_pfm(path);
    FAIL("expected a truncation error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::Parse);
  }
}

TEST_CASE("missing files report the path") {
  const fs::path missing = scratch("does_not_exist.png");
  fs::remove(missing);
  try {
    io::load_image(missing);
    FAIL("expected an I/O error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::Io);
    CHECK(std::string(e.what()).find(missing.string()) != std::string::npos);
  }
  CHECK_THROWS_AS(io::load_png(missing), Error);
  CHECK_THROWS_AS(io::save_image(Image(2, 1, 1), scratch("x.bmp")), Error);
}

TEST_CASE("corrupt PNG is rejected") {
  const auto path = scratch("corrupt.png");
  {
    std::ofstream f(path, std::ios::binary);
    f << "\x89PNG\r\n\x1a\n garbage";
  }
  CHECK_THROWS_AS(io::load_png(path), Error);
}

} // TEST_SUITE
