// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "core/curriculum.hpp"
#include "core/error.hpp"

using namespace panoedit;
using namespace panoedit::curriculum;

TEST_SUITE("curriculum") {

TEST_CASE("anchor probabilities") {
  const MixSchedule s;
  CHECK(mix_probabilities(0, s) == std::vector<double>{1.0, 0.0});
  CHECK(mix_probabilities(s.ramp_steps, s) == std::vector<double>{0.2, 0.8});
  CHECK(mix_probabilities(10 * s.ramp_steps, s) == std::vector<double>{0.2, 0.8});
  const auto mid = mix_probabilities(s.ramp_steps / 2, s);
  CHECK(mid[1] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(mid[0] == doctest::Approx(0.6).epsilon(1e-15));
  MixSchedule s3;
  s3.phase = MixPhase::Stage3Steady;
  CHECK(mix_probabilities(0, s3) == std::vector<double>{0.2, 0.2, 0.6});
  CHECK(mix_probabilities(123456, s3) == std::vector<double>{0.2, 0.2, 0.6});
}

TEST_CASE("ramp is a valid, linear, nondecreasing distribution") {
  MixSchedule s;
  s.ramp_steps = 997;
  std::vector<double> p2;
  for (long long step = 0; step <= 1200; ++step) {
    const auto p = mix_probabilities(step, s);
    REQUIRE(p.size() == 2);
    CHECK(p[0] >= 0.0);
    CHECK(p[1] >= 0.0);
    CHECK(std::abs(p[0] + p[1] - 1.0) <= 1e-12);
    p2.push_back(p[1]);
  }
  for (std::size_t i = 1; i < p2.size(); ++i)
    CHECK(p2[i] >= p2[i - 1]);
  for (std::size_t i = 1; i + 1 < 997; ++i)
    CHECK(std::abs(p2[i + 1] - 2.0 * p2[i] + p2[i - 1]) < 1e-15);
}

TEST_CASE("schedule validation") {
  MixSchedule s;
  CHECK_NOTHROW(s.validate());
  s.ramp_steps = 0;
  CHECK_THROWS_AS(s.validate(), Error);
  s = MixSchedule{};
  s.target_new = 0.7;
  CHECK_THROWS_AS(s.validate(), Error);
  s = MixSchedule{};
  s.stage3 = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(s.validate(), Error);
  s = MixSchedule{};
  s.stage3 = {-0.1, 0.5, 0.6};
  CHECK_THROWS_AS(s.validate(), Error);
  CHECK_THROWS_AS(mix_probabilities(-1, MixSchedule{}), Error);
}

TEST_CASE("degenerate schedule always draws stage 1") {
  StageSampler sampler(5);
  const MixSchedule s;
  for (int i = 0; i < 1000; ++i)
    CHECK(sampler.sample(0, s) == 1);
  MixSchedule keep;
  keep.target_new = 0.0;
  keep.retained_old = 1.0;
  for (int i = 0; i < 1000; ++i)
    CHECK(sampler.sample(5000, keep) == 1);
  CHECK(sampler.log().counts[0] == 2000);
}

TEST_CASE("empirical frequencies") {
  const int n = 100000;
  {
    StageSampler sampler(11);
    const MixSchedule s;
    for (int i = 0; i < n; ++i)
      sampler.sample(s.ramp_steps / 4, s);
    const auto &log = sampler.log();
    CHECK(std::abs(static_cast<double>(log.counts[1]) / n - 0.2) < 0.01);
    CHECK(log.counts[2] == 0);
  }
  {
    StageSampler sampler(12);
    MixSchedule s;
    s.phase = MixPhase::Stage3Steady;
    for (int i = 0; i < n; ++i)
      sampler.sample(0, s);
    const auto &log = sampler.log();
    CHECK(log.counts[0] + log.counts[1] + log.counts[2] == log.total);
    CHECK(log.total == static_cast<std::uint64_t>(n));
    CHECK(std::abs(static_cast<double>(log.counts[0]) / n - 0.2) < 0.01);
    CHECK(std::abs(static_cast<double>(log.counts[1]) / n - 0.2) < 0.01);
    CHECK(std::abs(static_cast<double>(log.counts[2]) / n - 0.6) < 0.01);
  }
}

TEST_CASE("seeded streams") {
  const MixSchedule s;
  auto draws = [&](std::uint64_t seed, std::uint32_t worker) {
    StageSampler sampler(seed, worker);
    std::vector<int> out;
    for (int i = 0; i < 500; ++i)
      out.push_back(sampler.sample(s.ramp_steps, s));
    return out;
  };
  CHECK(draws(7, 0) == draws(7, 0));
  CHECK(draws(7, 0) != draws(8, 0));
  CHECK(draws(7, 0) != draws(7, 1));
  StageSampler a(7);
  CHECK(a.log().seed == 7);
}

} // TEST_SUITE
