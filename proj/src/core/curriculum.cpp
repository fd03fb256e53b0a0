// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include "core/curriculum.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace panoedit::curriculum {

namespace {
constexpr std::uint64_t kCurriculumStream = 0x6375727200000000ull;
}

void MixSchedule::validate() const {
  require(ramp_steps > 0, ErrorCode::InvalidArgument, "ramp length must be positive");
  require(target_new >= 0.0 && target_new <= 1.0 && retained_old >= 0.0 && retained_old <= 1.0,
          ErrorCode::InvalidArgument, "mix fractions must be in [0, 1]");
  require(std::abs(target_new + retained_old - 1.0) <= 1e-12, ErrorCode::InvalidArgument,
          "target_new + retained_old must equal 1");
  for (double p : stage3)
    require(p >= 0.0, ErrorCode::InvalidArgument, "stage-3 probabilities must be non-negative");
  require(std::abs(stage3[0] + stage3[1] + stage3[2] - 1.0) <= 1e-12, ErrorCode::InvalidArgument,
          "stage-3 probabilities must sum to 1");
}

std::vector<double> mix_probabilities(long long step, const MixSchedule &schedule) {
  schedule.validate();
  require(step >= 0, ErrorCode::InvalidArgument, "step must be non-negative");
  if (schedule.phase == MixPhase::Stage3Steady)
    return {schedule.stage3.begin(), schedule.stage3.end()};
  const double r = std::min(static_cast<double>(step) / static_cast<double>(schedule.ramp_steps), 1.0);
  return {(1.0 - r) + r * schedule.retained_old, r * schedule.target_new};
}

StageSampler::StageSampler(std::uint64_t seed, std::uint32_t worker)
    : rng_(seed, kCurriculumStream | worker) {
  log_.seed = seed;
}

int StageSampler::sample(long long step, const MixSchedule &schedule) {
  const std::vector<double> p = mix_probabilities(step, schedule);
  const double u = rng_.uniform();
  double acc = 0.0;
  int stage = static_cast<int>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) {
      stage = static_cast<int>(i) + 1;
      break;
    }
  }
  // u < 1 always, but a short cumulative sum must not select a zero-mass stage.
  while (stage > 1 && p[static_cast<std::size_t>(stage - 1)] == 0.0)
    --stage;
  ++log_.counts[static_cast<std::size_t>(stage - 1)];
  ++log_.total;
  return stage;
}

} // namespace panoedit::curriculum
