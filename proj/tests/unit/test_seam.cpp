// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "core/error.hpp"
#include "core/seam_inference.hpp"

using namespace panoedit;
using namespace panoedit::seam;

namespace {

Latent random_latent(std::mt19937_64 &rng, int c, int h, int w) {
  std::normal_distribution<double> n(0.0, 1.0);
  Latent z(c, h, w);
  for (auto &v : z.values())
    v = n(rng);
  return z;
}

// Periodic smooth target, continuous across the wrap.
Latent periodic_target(int c, int h, int w, double phase) {
  Latent z(c, h, w);
  for (int k = 0; k < c; ++k)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        z.at(k, y, x) = std::sin(2.0 * std::numbers::pi * x / w + phase + k) + 0.3 * std::cos(4.0 * std::numbers::pi * x / w + y);
  return z;
}

double max_abs_diff(const Latent &a, const Latent &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

} // namespace

TEST_SUITE("seam") {

TEST_CASE("extend and crop") {
  std::mt19937_64 rng(61);
  const Latent z = random_latent(rng, 2, 3, 10);
  const Latent e1 = extend_boundary(z, 1);
  CHECK(e1.width() == 11);
  for (int c = 0; c < 2; ++c)
    for (int y = 0; y < 3; ++y)
      CHECK(e1.at(c, y, 10) == z.at(c, y, 0));
  for (int b = 1; b < 10; ++b) {
    const Latent e = extend_boundary(z, b);
    CHECK(e.width() == 10 + b);
    CHECK(crop_width(e, 10) == z);
  }
  CHECK_THROWS_AS(extend_boundary(z, 10), Error);
  CHECK_THROWS_AS(extend_boundary(z, 0), Error);
  CHECK_THROWS_AS(crop_width(z, 11), Error);
}

TEST_CASE("cyclic roll") {
  std::mt19937_64 rng(62);
  const Latent z = random_latent(rng, 3, 2, 12);
  CHECK(cyclic_roll(z, 0) == z);
  CHECK(cyclic_roll(z, 12) == z);
  CHECK(cyclic_roll(z, -24) == z);
  const Latent r = cyclic_roll(z, 5);
  for (int x = 0; x < 12; ++x)
    CHECK(r.at(1, 1, x) == z.at(1, 1, ((x - 5) % 12 + 12) % 12));
  for (int s1 = -13; s1 <= 13; s1 += 3)
    for (int s2 = -7; s2 <= 20; s2 += 4) {
      CHECK(cyclic_roll(cyclic_roll(z, s1), s2) == cyclic_roll(z, s1 + s2));
      CHECK(cyclic_roll(cyclic_roll(z, s1), -s1) == z);
    }
  CHECK(cyclic_roll(cyclic_roll(z, 4), 4) == cyclic_roll(z, 8));
}

TEST_CASE("boundary blend") {
  std::mt19937_64 rng(63);
  const Latent z = random_latent(rng, 2, 2, 8);
  const Latent same = extend_boundary(z, 3);
  CHECK(blend_boundary(same, 3) == same);

  Latent one = extend_boundary(z, 1);
  one.at(0, 0, 8) = 5.0;
  const double u = one.at(0, 0, 0);
  const Latent b1 = blend_boundary(one, 1);
  CHECK(b1.at(0, 0, 0) == (u + 5.0) / 2.0);
  CHECK(b1.at(0, 0, 8) == (u + 5.0) / 2.0);

  const Latent ext = random_latent(rng, 1, 1, 12); // w = 8, b = 4
  const Latent b4 = blend_boundary(ext, 4);
  // lambda(0) = 0 takes the extension column, lambda(b - 1) = 1 the source.
  CHECK(b4.at(0, 0, 0) == ext.at(0, 0, 8));
  CHECK(b4.at(0, 0, 3) == ext.at(0, 0, 3));
  CHECK(b4.at(0, 0, 1) == doctest::Approx(ext.at(0, 0, 1) / 3.0 + 2.0 * ext.at(0, 0, 9) / 3.0));
  for (int i = 0; i < 4; ++i)
    CHECK(b4.at(0, 0, i) == b4.at(0, 0, 8 + i));
  for (int x = 4; x < 8; ++x)
    CHECK(b4.at(0, 0, x) == ext.at(0, 0, x));
  CHECK_THROWS_AS(blend_boundary(ext, 12), Error);
}

TEST_CASE("seam metric") {
  CHECK(seam_discontinuity(Latent(2, 3, 8, 0.7)) == 0.0);
  Latent step(2, 3, 8, 0.0);
  for (int c = 0; c < 2; ++c)
    for (int y = 0; y < 3; ++y)
      step.at(c, y, 7) = 0.25;
  CHECK(seam_discontinuity(step) == 0.25);
  std::mt19937_64 rng(64);
  const Latent z = random_latent(rng, 3, 4, 9);
  double s = 0.0;
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < 4; ++y)
      s += std::abs(z.at(c, y, 8) - z.at(c, y, 0));
  CHECK(seam_discontinuity(z) == doctest::Approx(s / 12.0).epsilon(1e-15));
  Image img(8, 2, 1);
  img.at(7, 0) = 1.0;
  CHECK(seam_discontinuity(img) == 0.5);
  CHECK_THROWS_AS(seam_discontinuity(Latent(1, 1, 1)), Error);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(SeamConfig{}.validate(64));
  CHECK_THROWS_AS((SeamConfig{64, 8, 4, 20, 1.0, false}.validate(64)), Error);
  CHECK_THROWS_AS((SeamConfig{0, 8, 4, 20, 1.0, false}.validate(64)), Error);
  CHECK_THROWS_AS((SeamConfig{8, 8, 21, 20, 1.0, false}.validate(64)), Error);
  CHECK_THROWS_AS((SeamConfig{8, 0, 4, 20, 1.0, false}.validate(64)), Error);
  CHECK_NOTHROW((SeamConfig{8, 0, 0, 20, 1.0, false}.validate(64)));
  CHECK_THROWS_AS((SeamConfig{8, 8, 4, 0, 1.0, false}.validate(64)), Error);
  CHECK_THROWS_AS((SeamConfig{8, 8, 4, 20, 0.0, false}.validate(64)), Error);
  CHECK_THROWS_AS((SeamConfig{8, 8, 4, 20, 1.5, false}.validate(64)), Error);
  // Baseline ignores extension and roll settings.
  CHECK_NOTHROW((SeamConfig{100, 0, 50, 20, 1.0, true}.validate(64)));
}

TEST_CASE("toy denoiser reaches its target") {
  const Latent target = periodic_target(4, 6, 32, 0.3);
  const ToyDenoiser toy;
  for (double strength : {1.0, 0.6}) {
    for (int T : {1, 5, 20, 64}) {
      const SeamConfig base{8, 8, 0, T, strength, true};
      const Latent out = run_seam_inference(toy, target, target, base, 3);
      CHECK(out.same_shape(target));
      CHECK(max_abs_diff(out, target) < 1e-6);
    }
  }
  const Latent other = periodic_target(4, 6, 32, 1.1);
  const Latent out = run_seam_inference(toy, other, target, SeamConfig{8, 8, 0, 20, 1.0, true}, 4);
  CHECK(max_abs_diff(out, target) < 1e-6);
}

TEST_CASE("without rolls the strategy matches the baseline on a continuous target") {
  const Latent target = periodic_target(2, 4, 32, 0.0);
  const ToyDenoiser toy;
  const Latent base = run_seam_inference(toy, target, target, SeamConfig{8, 8, 0, 20, 1.0, true}, 5);
  const Latent k0 = run_seam_inference(toy, target, target, SeamConfig{8, 8, 0, 20, 1.0, false}, 5);
  CHECK(k0.same_shape(base));
  CHECK(max_abs_diff(k0, base) < 1e-6);
  const Latent rolled = run_seam_inference(toy, target, target, SeamConfig{4, 3, 5, 64, 1.0, false}, 5);
  CHECK(rolled.width() == 32);
  CHECK(max_abs_diff(rolled, target) < 1e-4);
}

TEST_CASE("net roll is undone") {
  // Marked target: a single bright column.
  Latent target(1, 2, 32, 0.0);
  for (int y = 0; y < 2; ++y)
    target.at(0, y, 11) = 1.0;
  const ToyDenoiser toy(0.8, 2);
  const Latent out = run_seam_inference(toy, target, target, SeamConfig{6, 5, 3, 20, 1.0, false}, 9);
  int best_lag = -1;
  double best = -1e300;
  for (int lag = 0; lag < 32; ++lag) {
    double s = 0.0;
    for (int y = 0; y < 2; ++y)
      for (int x = 0; x < 32; ++x)
        s += out.at(0, y, (x + lag) % 32) * target.at(0, y, x);
    if (s > best) {
      best = s;
      best_lag = lag;
    }
  }
  CHECK(best_lag == 0);
}

TEST_CASE("strategy reduces the seam of a leaky denoiser") {
  const ToyDenoiser toy(0.8, 2);
  int improved = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Latent target = periodic_target(4, 8, 64, 0.1 * static_cast<double>(seed));
    const double with = seam_discontinuity(run_seam_inference(toy, target, target, SeamConfig{8, 8, 5, 20, 1.0, false}, seed));
    const double without = seam_discontinuity(run_seam_inference(toy, target, target, SeamConfig{8, 8, 5, 20, 1.0, true}, seed));
    improved += with <= without ? 1 : 0;
  }
  CHECK(improved == 20);
}

TEST_CASE("deterministic per seed") {
  const ToyDenoiser toy(0.5, 2);
  const Latent target = periodic_target(2, 4, 32, 0.0);
  const SeamConfig cfg{4, 4, 2, 10, 0.8, false};
  CHECK(run_seam_inference(toy, target, target, cfg, 1) == run_seam_inference(toy, target, target, cfg, 1));
  CHECK(run_seam_inference(toy, target, target, cfg, 1) != run_seam_inference(toy, target, target, cfg, 2));
}

TEST_CASE("contract violations") {
  const Latent z(2, 4, 32, 0.0);
  Denoiser bad = [](const Latent &, const StepInfo &, const Latent &) { return Latent(2, 4, 31); };
  try {
    run_seam_inference(bad, z, z, SeamConfig{}, 0);
    FAIL("expected a contract error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::Contract);
  }
  CHECK_THROWS_AS(run_seam_inference(ToyDenoiser(), z, Latent(2, 4, 16), SeamConfig{}, 0), Error);
  CHECK_THROWS_AS(ToyDenoiser(1.5, 2), Error);
  CHECK_THROWS_AS(ToyDenoiser(0.5, 0), Error);
}

TEST_CASE("denoiser sees the documented schedule") {
  std::vector<StepInfo> seen;
  Denoiser spy = [&](const Latent &z, const StepInfo &s, const Latent &) {
    seen.push_back(s);
    return Latent(z.channels(), z.height(), z.width());
  };
  const Latent z(1, 2, 16, 0.0);
  run_seam_inference(spy, z, z, SeamConfig{4, 2, 1, 4, 0.5, false}, 0);
  REQUIRE(seen.size() == 4);
  CHECK(seen[0].t == 4);
  CHECK(seen[0].tau == 0.5);
  CHECK(seen[3].t == 1);
  CHECK(seen[3].tau == 0.125);
  CHECK(seen[2].dt == 0.125);
}

TEST_CASE("edge leak profile") {
  const ToyDenoiser toy(0.8, 2);
  CHECK(toy.leak_at(0, 10) == 0.8);
  CHECK(toy.leak_at(9, 10) == 0.8);
  CHECK(toy.leak_at(1, 10) == doctest::Approx(0.4));
  CHECK(toy.leak_at(2, 10) == 0.0);
  CHECK(ToyDenoiser().leak_at(0, 10) == 0.0);
}

} // TEST_SUITE
