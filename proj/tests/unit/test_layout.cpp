// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "core/error.hpp"
#include "core/token_layout.hpp"

using namespace panoedit;
using namespace panoedit::layout;

namespace {

Latent random_latent(std::mt19937_64 &rng, int c, int h, int w) {
  std::normal_distribution<double> n(0.0, 1.0);
  Latent z(c, h, w);
  for (auto &v : z.values())
    v = n(rng);
  return z;
}

Latent box_latent(int h, int w, int y0, int x0, int y1, int x1) {
  Latent m(1, h, w);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x)
      m.at(0, y, x) = 1.0;
  return m;
}

std::vector<double> random_vec(std::mt19937_64 &rng, int d) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(d));
  for (auto &x : v)
    x = n(rng);
  return v;
}

double dot(const std::vector<double> &a, const std::vector<double> &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

Stage2Inputs stage2_fixture(std::mt19937_64 &rng, int K, int c = 4, int h = 4, int w = 8) {
  Stage2Inputs in{random_latent(rng, c, h, w), random_latent(rng, c, h, w), {}, {}, {}};
  for (int k = 0; k < K; ++k) {
    in.layer_latents.push_back(random_latent(rng, c, h, w));
    in.ref_latents.push_back(random_latent(rng, c, h, w));
    in.box_masks.push_back(box_latent(h, w, 0, 2 * k, 2, 2 * k + 2));
  }
  return in;
}

} // namespace

TEST_SUITE("layout") {

TEST_CASE("mask downsampling") {
  const Latent ones = downsample_mask(Image(32, 16, 1, 1.0), 4);
  CHECK(ones.channels() == 1);
  CHECK(ones.height() == 4);
  CHECK(ones.width() == 8);
  for (double v : ones.values())
    CHECK(v == 1.0);

  Image single(32, 16, 1);
  single.at(13, 6) = 0.3;
  const Latent s = downsample_mask(single, 4);
  int set = 0;
  for (double v : s.values())
    set += v != 0.0 ? 1 : 0;
  CHECK(set == 1);
  CHECK(s.at(0, 1, 3) == 0.3);
  // Averaging against the threshold drops a single pixel.
  const Latent avg = downsample_mask(single, 4, DownsampleMode::AverageThreshold);
  for (double v : avg.values())
    CHECK(v == 0.0);

  CHECK_THROWS_AS(downsample_mask(Image(30, 16, 1), 4), Error);
  CHECK_THROWS_AS(downsample_mask(Image(32, 16, 2), 4), Error);
  CHECK_THROWS_AS(downsample_mask(Image(32, 16, 1), 0), Error);
}

TEST_CASE("max pooling matches a block-max oracle") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int f : {1, 2, 4, 8}) {
    Image mask(64, 32, 1);
    for (auto &v : mask.values())
      v = u(rng) < 0.05 ? u(rng) : 0.0;
    const Latent m = downsample_mask(mask, f);
    for (int y = 0; y < 32 / f; ++y)
      for (int x = 0; x < 64 / f; ++x) {
        double best = 0.0;
        for (int r = y * f; r < (y + 1) * f; ++r)
          for (int c = x * f; c < (x + 1) * f; ++c)
            best = std::max(best, mask.at(c, r));
        CHECK(m.at(0, y, x) == best);
      }
  }
}

TEST_CASE("stage 1 input") {
  std::mt19937_64 rng(42);
  const Latent z_t = random_latent(rng, 4, 4, 8), z_0 = random_latent(rng, 4, 4, 8);
  const auto zero = build_stage1_input(z_t, z_0, Latent(1, 4, 8, 0.0));
  CHECK(zero.tensor().channels() == 9);
  CHECK(zero.block("z_con") == z_0);
  CHECK(zero.block("z_t") == z_t);
  CHECK(zero.layer_id() == 0);

  const auto full = build_stage1_input(z_t, z_0, Latent(1, 4, 8, 1.0));
  const Latent con = full.block("z_con");
  for (double v : con.values())
    CHECK(v == 0.0);

  const Latent m = box_latent(4, 8, 1, 2, 3, 5);
  const auto part = build_stage1_input(z_t, z_0, m);
  const Latent pc = part.block("z_con");
  for (int c = 0; c < 4; ++c)
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 8; ++x)
        CHECK(pc.at(c, y, x) == z_0.at(c, y, x) * (1.0 - m.at(0, y, x)));
  CHECK(part.block("m") == m);
  std::vector<std::string> names;
  for (const auto &s : part.manifest())
    names.push_back(s.name);
  CHECK(names == std::vector<std::string>{"z_t", "z_con", "m"});
  CHECK(part.manifest()[0].kind == BlockKind::Noisy);
  CHECK(part.manifest()[1].kind == BlockKind::Context);
  CHECK(part.manifest()[2].kind == BlockKind::Mask);

  CHECK_THROWS_AS(build_stage1_input(z_t, random_latent(rng, 3, 4, 8), m), Error);
  CHECK_THROWS_AS(build_stage1_input(z_t, z_0, Latent(2, 4, 8)), Error);
  CHECK_THROWS_AS(build_stage1_input(z_t, z_0, Latent(1, 2, 8)), Error);
}

TEST_CASE("stage 2 inputs") {
  std::mt19937_64 rng(43);
  SUBCASE("one layer") {
    const auto in = stage2_fixture(rng, 1);
    const auto b = build_stage2_inputs(in);
    REQUIRE(b.size() == 2);
    CHECK(b[0].layer_id() == 0);
    CHECK(b[1].layer_id() == 1);
    CHECK(b[0].block("m_union") == in.box_masks[0]);
    CHECK(b[1].block("z_t_1") == in.layer_latents[0]);
    CHECK(b[1].block("z_ref_1") == in.ref_latents[0]);
    CHECK(b[1].block("m_box_1") == in.box_masks[0]);
    CHECK(b[0].block("z_t_tgt") == in.z_tgt_t);
  }
  SUBCASE("disjoint union is the sum") {
    const auto in = stage2_fixture(rng, 3);
    const Latent u = union_mask(in.box_masks);
    for (std::size_t i = 0; i < u.size(); ++i) {
      double s = 0.0;
      for (const auto &m : in.box_masks)
        s += m.values()[i];
      CHECK(u.values()[i] == s);
    }
    const auto b = build_stage2_inputs(in);
    REQUIRE(b.size() == 4);
    const Latent vis = b[0].block("z_src_vis");
    for (int c = 0; c < vis.channels(); ++c)
      for (int y = 0; y < vis.height(); ++y)
        for (int x = 0; x < vis.width(); ++x)
          CHECK(vis.at(c, y, x) == in.z_src.at(c, y, x) * (1.0 - u.at(0, y, x)));
    for (std::size_t k = 0; k < b.size(); ++k) {
      CHECK(b[k].layer_id() == static_cast<int>(k));
      for (const auto &s : b[k].manifest())
        CHECK(s.layer_id == static_cast<int>(k));
    }
  }
  SUBCASE("overlapping union is the max") {
    std::vector<Latent> masks = {box_latent(4, 8, 0, 0, 3, 3), box_latent(4, 8, 1, 1, 4, 4)};
    masks[1].at(0, 1, 1) = 0.5;
    const Latent u = union_mask(masks);
    CHECK(u.at(0, 1, 1) == 1.0);
    CHECK(u.at(0, 3, 3) == 1.0);
    CHECK(u.at(0, 3, 5) == 0.0);
  }
  SUBCASE("errors") {
    Stage2Inputs none = stage2_fixture(rng, 0);
    CHECK_THROWS_AS(build_stage2_inputs(none), Error);
    Stage2Inputs short_refs = stage2_fixture(rng, 2);
    short_refs.ref_latents.pop_back();
    CHECK_THROWS_AS(build_stage2_inputs(short_refs), Error);
    Stage2Inputs bad = stage2_fixture(rng, 1);
    bad.box_masks[0] = Latent(1, 2, 8);
    CHECK_THROWS_AS(build_stage2_inputs(bad), Error);
    CHECK_THROWS_AS(union_mask(std::vector<Latent>{}), Error);
  }
}

TEST_CASE("manifest partitions the channel axis and round trips") {
  std::mt19937_64 rng(44);
  const auto in = stage2_fixture(rng, 2, 3);
  for (const auto &bundle : build_stage2_inputs(in)) {
    int next = 0;
    for (const auto &s : bundle.manifest()) {
      CHECK(s.offset == next);
      CHECK(s.length > 0);
      next += s.length;
    }
    CHECK(next == bundle.tensor().channels());
    const auto parts = bundle.split();
    REQUIRE(parts.size() == bundle.manifest().size());
    CHECK(concat_channels(parts) == bundle.tensor());
    for (std::size_t i = 0; i < parts.size(); ++i)
      CHECK(parts[i] == bundle.block(bundle.manifest()[i].name));

    std::istringstream text(bundle.manifest_text());
    std::string name;
    int offset = 0, length = 0, layer = 0;
    std::size_t lines = 0;
    while (text >> name >> offset >> length >> layer) {
      const auto &s = bundle.manifest()[lines++];
      CHECK(name == s.name);
      CHECK(offset == s.offset);
      CHECK(length == s.length);
      CHECK(layer == s.layer_id);
    }
    CHECK(lines == bundle.manifest().size());
  }
}

TEST_CASE("bundle assembly") {
  std::mt19937_64 rng(45);
  const Latent a = random_latent(rng, 2, 3, 6), b = random_latent(rng, 1, 3, 6);
  const auto bundle = ConditioningBundle::assemble({{"a", BlockKind::Context, a}, {"b", BlockKind::Mask, b}}, 5);
  CHECK(bundle.span("b") == BlockSpan{"b", 2, 1, 5, BlockKind::Mask});
  CHECK_THROWS_AS(bundle.span("c"), Error);
  CHECK_THROWS_AS(ConditioningBundle::assemble({}, 0), Error);
  CHECK_THROWS_AS(
      ConditioningBundle::assemble({{"a", BlockKind::Context, a}, {"b", BlockKind::Mask, Latent(1, 2, 6)}}, 0), Error);
}

TEST_CASE("conditioning dropout") {
  std::mt19937_64 rng(46);
  const auto bundle = build_stage1_input(random_latent(rng, 4, 4, 8), random_latent(rng, 4, 4, 8),
                                         box_latent(4, 8, 1, 1, 3, 3));
  CHECK(apply_conditioning_dropout(bundle, {0.0, 0.0}, 1).tensor() == bundle.tensor());
  const auto all = apply_conditioning_dropout(bundle, {1.0, 1.0}, 1);
  CHECK(all.block("z_t") == bundle.block("z_t"));
  const Latent con = all.block("z_con"), m = all.block("m");
  for (double v : con.values())
    CHECK(v == 0.0);
  for (double v : m.values())
    CHECK(v == 1.0);
  CHECK(all.manifest() == bundle.manifest());

  // Deterministic per seed; rates near one half mix outcomes across seeds.
  int dropped = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto a = apply_conditioning_dropout(bundle, {0.5, 0.5}, seed);
    CHECK(a.tensor() == apply_conditioning_dropout(bundle, {0.5, 0.5}, seed).tensor());
    dropped += a.block("z_con") != bundle.block("z_con") ? 1 : 0;
  }
  CHECK(dropped > 60);
  CHECK(dropped < 140);
}

TEST_CASE("rope split") {
  const auto s = RopeSplit::default_for(64);
  CHECK(s.layer == 16);
  CHECK(s.y == 24);
  CHECK(s.x == 24);
  for (int d = 2; d <= 256; d += 2) {
    const auto t = RopeSplit::default_for(d);
    CHECK(t.total() == d);
    CHECK(t.layer % 2 == 0);
    CHECK(t.y % 2 == 0);
    CHECK(t.x % 2 == 0);
  }
  CHECK_THROWS_AS(RopeSplit::default_for(7), Error);
}

TEST_CASE("rope identity and errors") {
  std::mt19937_64 rng(47);
  const auto v = random_vec(rng, 32);
  CHECK(rope3d_apply(v, {0, 0.0, 0.0}, RopeSplit::default_for(32)) == v);
  CHECK_THROWS_AS(rope3d_apply(v, {1, 1, 1}, RopeSplit{9, 12, 11}), Error);
  CHECK_THROWS_AS(rope3d_apply(v, {1, 1, 1}, RopeSplit{8, 12, 14}), Error);
}

TEST_CASE("rope rotates each axis block independently") {
  std::mt19937_64 rng(48);
  const RopeSplit split{4, 6, 6};
  const auto v = random_vec(rng, 16);
  const auto only_y = rope3d_apply(v, {0, 3.0, 0.0}, split);
  for (int i = 0; i < 4; ++i)
    CHECK(only_y[static_cast<std::size_t>(i)] == v[static_cast<std::size_t>(i)]);
  for (int i = 10; i < 16; ++i)
    CHECK(only_y[static_cast<std::size_t>(i)] == v[static_cast<std::size_t>(i)]);
  // First pair of the y block turns by exactly y radians.
  CHECK(only_y[4] == doctest::Approx(v[4] * std::cos(3.0) - v[5] * std::sin(3.0)));
  CHECK(only_y[5] == doctest::Approx(v[4] * std::sin(3.0) + v[5] * std::cos(3.0)));
  // Second pair uses base^(-2/6).
  const double f = std::pow(kRopeBase, -2.0 / 6.0);
  CHECK(only_y[6] == doctest::Approx(v[6] * std::cos(3.0 * f) - v[7] * std::sin(3.0 * f)));
}

TEST_CASE("rope preserves norms and relative positions") {
  std::mt19937_64 rng(49);
  std::uniform_int_distribution<int> ui(-40, 40), ul(0, 6);
  const RopeSplit split = RopeSplit::default_for(48);
  for (int i = 0; i < 2000; ++i) {
    const auto q = random_vec(rng, 48), k = random_vec(rng, 48);
    const TokenPosition p1{ul(rng), static_cast<double>(ui(rng)), static_cast<double>(ui(rng))};
    const TokenPosition p2{ul(rng), static_cast<double>(ui(rng)), static_cast<double>(ui(rng))};
    const auto rq = rope3d_apply(q, p1, split);
    CHECK(std::abs(std::sqrt(dot(rq, rq)) - std::sqrt(dot(q, q))) < 1e-9);
    const int dl = ul(rng), dy = ui(rng), dx = ui(rng);
    const double base = dot(rq, rope3d_apply(k, p2, split));
    const double shifted = dot(rope3d_apply(q, {p1.layer_id + dl, p1.y + dy, p1.x + dx}, split),
                               rope3d_apply(k, {p2.layer_id + dl, p2.y + dy, p2.x + dx}, split));
    CHECK(std::abs(base - shifted) < 1e-6);
  }
}

TEST_CASE("layer ids are distinguishable") {
  std::mt19937_64 rng(50);
  const RopeSplit split = RopeSplit::default_for(32);
  int differ = 0;
  const int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    const auto q = random_vec(rng, 32);
    const double y = static_cast<double>(rng() % 16), x = static_cast<double>(rng() % 32);
    const double same = dot(rope3d_apply(q, {1, y, x}, split), rope3d_apply(q, {1, y, x}, split));
    const double other = dot(rope3d_apply(q, {1, y, x}, split), rope3d_apply(q, {2, y, x}, split));
    differ += std::abs(same - other) > 1e-9 ? 1 : 0;
  }
  CHECK(differ == trials);
}

} // TEST_SUITE
