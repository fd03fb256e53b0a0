// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "core/distortion.hpp"
#include "core/error.hpp"
#include "core/philox.hpp"

using namespace panoedit;
using namespace panoedit::distortion;

namespace {

constexpr double kPi = std::numbers::pi;

// Bilinear weights of row `y` of the stretch, as a dense W x W matrix
// (output column, base column), built independently of the library.
std::vector<double> stretch_matrix(int w, int h, int y) {
  std::vector<double> a(static_cast<std::size_t>(w) * w, 0.0);
  const double d = std::cos(kPi / 2 - kPi * y / h);
  for (int x = 0; x < w; ++x) {
    const double p = w / 2.0 + (x + 0.5 - w / 2.0) * d - 0.5;
    const double fl = std::floor(p);
    const double f = p - fl;
    const int i0 = ((static_cast<int>(fl) % w) + w) % w;
    a[static_cast<std::size_t>(x) * w + i0] += 1.0 - f;
    a[static_cast<std::size_t>(x) * w + (i0 + 1) % w] += f;
  }
  return a;
}

// E[within-row sample variance] of A e with e ~ N(0, I):
// (||A||_F^2 - ||A^T 1||^2 / W) / W.
double expected_row_variance(int w, int h, int y) {
  const auto a = stretch_matrix(w, h, y);
  double frob = 0.0;
  std::vector<double> colsum(static_cast<std::size_t>(w), 0.0);
  for (int x = 0; x < w; ++x)
    for (int j = 0; j < w; ++j) {
      const double v = a[static_cast<std::size_t>(x) * w + j];
      frob += v * v;
      colsum[static_cast<std::size_t>(j)] += v;
    }
  double cs = 0.0;
  for (double s : colsum)
    cs += s * s;
  return (frob - cs / w) / w;
}

// Ratio of expected lag-1 autocovariance to expected variance, same matrix.
double expected_lag1(int w, int h, int y) {
  const auto a = stretch_matrix(w, h, y);
  std::vector<double> centered(a);
  for (int j = 0; j < w; ++j) {
    double m = 0.0;
    for (int x = 0; x < w; ++x)
      m += a[static_cast<std::size_t>(x) * w + j];
    m /= w;
    for (int x = 0; x < w; ++x)
      centered[static_cast<std::size_t>(x) * w + j] -= m;
  }
  double num = 0.0, den = 0.0;
  for (int x = 0; x < w; ++x)
    for (int j = 0; j < w; ++j) {
      const double v = centered[static_cast<std::size_t>(x) * w + j];
      den += v * v;
      num += v * centered[static_cast<std::size_t>((x + 1) % w) * w + j];
    }
  return num / den;
}

double row_variance(const Latent &z, int c, int y) {
  double mean = 0.0;
  for (int x = 0; x < z.width(); ++x)
    mean += z.at(c, y, x);
  mean /= z.width();
  double var = 0.0;
  for (int x = 0; x < z.width(); ++x)
    var += (z.at(c, y, x) - mean) * (z.at(c, y, x) - mean);
  return var / z.width();
}

double row_lag1(const Latent &z, int c, int y) {
  double mean = 0.0;
  const int w = z.width();
  for (int x = 0; x < w; ++x)
    mean += z.at(c, y, x);
  mean /= w;
  double num = 0.0, den = 0.0;
  for (int x = 0; x < w; ++x) {
    const double a = z.at(c, y, x) - mean, b = z.at(c, y, (x + 1) % w) - mean;
    num += a * b;
    den += a * a;
  }
  return den > 0.0 ? num / den : 1.0;
}

} // namespace

TEST_SUITE("distortion") {

TEST_CASE("profile values") {
  for (int H : {2, 32, 64, 512, 1001}) {
    CHECK(alpha_at(H / 2.0, H) == 0.0);
    CHECK(alpha_at(0.0, H) == 1.0);
    CHECK(alpha_at(H, H) == 1.0);
    CHECK(scale_factor(H / 2.0, H) == 1.0);
    CHECK(scale_factor(0.0, H) == 0.0);
  }
  CHECK(alpha_at(64.0, 256) == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-14));
  CHECK(alpha_at(64.0, 256) == doctest::Approx(0.29289321881345254).epsilon(1e-14));
  CHECK(scale_factor(256.0 / 3.0, 256) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("profile identities") {
  const int H = 300;
  double prev = 2.0;
  for (int i = 0; i <= 8 * H; ++i) {
    const double y = i / 8.0; // exact mirror H - y
    CHECK(alpha_at(y, H) + scale_factor(y, H) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(alpha_at(y, H) == alpha_at(H - y, H));
    CHECK(alpha_at(y, H) >= 0.0);
    CHECK(alpha_at(y, H) <= 1.0);
    if (y <= H / 2.0) {
      CHECK(alpha_at(y, H) <= prev);
      prev = alpha_at(y, H);
    }
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(alpha_at(-0.001, 64), Error);
  CHECK_THROWS_AS(scale_factor(64.5, 64), Error);
  CHECK_THROWS_AS(alpha_at(1.0, 0), Error);
  CHECK_THROWS_AS(distortion_map(100, 64), Error);
  CHECK_THROWS_AS(distorted_noise(4, 64, 100, 1), Error);
  CHECK_THROWS_AS(distorted_noise(0, 8, 16, 1), Error);
  try {
    alpha_at(-1.0, 64);
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
}

TEST_CASE("AlphaProfile samples rows at y = row") {
  const auto p = AlphaProfile::sample(64);
  REQUIRE(p.values.size() == 64);
  CHECK(p.values[0] == 1.0);
  CHECK(p.values[32] == 0.0);
  for (int r = 1; r < 64; ++r)
    CHECK(p.values[static_cast<std::size_t>(r)] == p.values[static_cast<std::size_t>(64 - r)]);
}

TEST_CASE("distortion map is the profile broadcast") {
  const int W = 128, H = 64;
  const Image m = distortion_map(W, H);
  const auto p = AlphaProfile::sample(H);
  CHECK(m.channels() == 1);
  for (int r = 0; r < H; ++r)
    for (int c = 0; c < W; ++c)
      CHECK(m.at(c, r) == p.values[static_cast<std::size_t>(r)]);
  for (int c = 0; c < W; ++c) {
    CHECK(m.at(c, 0) == 1.0);
    CHECK(m.at(c, H / 2) == 0.0);
  }
}

TEST_CASE("gaussian field uses the documented draw order") {
  const Latent g = gaussian_field(2, 3, 6, 17);
  CHECK(g.at(1, 2, 5) == philox_normal(17, 0, g.index(1, 2, 5)));
  CHECK(g.at(0, 0, 0) == philox_normal(17, 0, 0));
  CHECK(gaussian_field(2, 3, 6, 17, 1) != g);
}

TEST_CASE("stretch leaves the equator and collapses the pole") {
  const int W = 128, H = 64;
  const Latent base = gaussian_field(3, H, W, 5);
  const auto raw = distorted_noise(3, H, W, 5, NoiseNormalization::None);
  for (int c = 0; c < 3; ++c)
    for (int x = 0; x < W; ++x) {
      CHECK(raw.values.at(c, H / 2, x) == base.at(c, H / 2, x));
      CHECK(raw.values.at(c, 0, x) == raw.values.at(c, 0, 0));
    }
  CHECK(raw.seed == 5);
}

TEST_CASE("per-channel normalization") {
  const auto n = distorted_noise(4, 64, 128, 123);
  for (int c = 0; c < 4; ++c) {
    double mean = 0.0, sq = 0.0;
    for (double v : n.values.plane(c)) {
      mean += v;
      sq += v * v;
    }
    mean /= static_cast<double>(n.values.plane_size());
    const double var = sq / static_cast<double>(n.values.plane_size()) - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.05);
  }
}

TEST_CASE("per-row and no normalization") {
  const auto rows = distorted_noise(2, 32, 64, 9, NoiseNormalization::PerRow);
  for (int y = 1; y < 32; ++y)
    CHECK(row_variance(rows.values, 1, y) == doctest::Approx(1.0).epsilon(1e-12));
  // Constant pole row stays at zero.
  CHECK(row_variance(rows.values, 0, 0) == 0.0);
  CHECK(rows.values.at(0, 0, 7) == 0.0);
  Latent raw = stretch_rows(gaussian_field(2, 32, 64, 9));
  CHECK(distorted_noise(2, 32, 64, 9, NoiseNormalization::None).values == raw);
  normalize(raw, NoiseNormalization::PerRow);
  CHECK(raw == rows.values);
}

TEST_CASE("deterministic per shape and seed") {
  CHECK(distorted_noise(4, 32, 64, 77).values == distorted_noise(4, 32, 64, 77).values);
  CHECK(distorted_noise(4, 32, 64, 77).values != distorted_noise(4, 32, 64, 78).values);
}

TEST_CASE("row variance matches the exact expectation") {
  const int W = 128, H = 64, seeds = 100, C = 4;
  std::vector<double> mc(H, 0.0);
  for (int s = 0; s < seeds; ++s) {
    const auto raw = distorted_noise(C, H, W, static_cast<std::uint64_t>(s), NoiseNormalization::None);
    for (int y = 0; y < H; ++y)
      for (int c = 0; c < C; ++c)
        mc[static_cast<std::size_t>(y)] += row_variance(raw.values, c, y) / (seeds * C);
  }
  for (int y = 0; y < H; ++y) {
    const double expect = expected_row_variance(W, H, y);
    // Sample-variance standard error for 400 rows of 128 correlated values.
    CHECK(std::abs(mc[static_cast<std::size_t>(y)] - expect) < 0.03 + 0.03 * expect);
  }
  auto band = [&](int lo, int hi) {
    double s = 0.0;
    for (int y = lo; y < hi; ++y)
      s += mc[static_cast<std::size_t>(y)] + mc[static_cast<std::size_t>(H - 1 - y)];
    return s / (2 * (hi - lo));
  };
  CHECK(mc[0] < 1e-20);
  const double near_pole = band(1, 6), mid = band(10, 20), equator = band(26, 32);
  CHECK(equator > mid);
  CHECK(mid > near_pole);
  CHECK(near_pole > 0.0);
}

TEST_CASE("horizontal correlation grows toward the pole") {
  const int W = 128, H = 64, seeds = 100;
  std::vector<double> lag(H / 2, 0.0);
  for (int s = 0; s < seeds; ++s) {
    const auto n = distorted_noise(1, H, W, 1000 + static_cast<std::uint64_t>(s));
    for (int y = 1; y <= H / 2; ++y)
      lag[static_cast<std::size_t>(y - 1)] += row_lag1(n.values, 0, y) / seeds;
  }
  // Rows 1 .. H/2 run from the pole to the equator.
  for (int y = 1; y <= H / 2; ++y)
    CHECK(std::abs(lag[static_cast<std::size_t>(y - 1)] - expected_lag1(W, H, y)) < 0.03);
  // Bilinear phase aliasing makes the last few rows before the equator
  // non-monotone; away from it the ordering is strict.
  for (int y = 1; y < 26; ++y) {
    CHECK(expected_lag1(W, H, y) > expected_lag1(W, H, y + 1));
    CHECK(lag[static_cast<std::size_t>(y - 1)] > lag[static_cast<std::size_t>(y)] - 0.02);
  }
  CHECK(lag.front() > 0.95);
  CHECK(std::abs(lag.back()) < 0.05);
  double pole_band = 0.0, equator_band = 0.0;
  for (int i = 0; i < 8; ++i) {
    pole_band += lag[static_cast<std::size_t>(i)];
    equator_band += lag[static_cast<std::size_t>(24 + i)];
  }
  CHECK(pole_band > equator_band);
}

} // TEST_SUITE
