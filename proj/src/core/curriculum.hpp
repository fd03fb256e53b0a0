// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "core/philox.hpp"

namespace panoedit::curriculum {

enum class MixPhase { Stage2Ramp, Stage3Steady };

struct MixSchedule {
  MixPhase phase = MixPhase::Stage2Ramp;
  long long ramp_steps = 1000;
  double target_new = 0.8;   // stage-2 share at the end of the ramp
  double retained_old = 0.2; // stage-1 share kept after the ramp
  std::array<double, 3> stage3 = {0.2, 0.2, 0.6};

  void validate() const;
};

/// Probabilities over stages 1..n (n = 2 during the ramp phase, 3 in the
/// stage-3 phase). During the ramp r = min(step / ramp_steps, 1) and
/// p = ((1 - r) + r * retained_old, r * target_new).
std::vector<double> mix_probabilities(long long step, const MixSchedule &schedule);

struct DrawLog {
  std::uint64_t seed = 0;
  std::array<std::uint64_t, 3> counts{};
  std::uint64_t total = 0;
};

/// Categorical stage draws from an independent Philox stream per
/// (seed, worker).
class StageSampler {
public:
  explicit StageSampler(std::uint64_t seed, std::uint32_t worker = 0);

  /// Stage id in 1..3.
  int sample(long long step, const MixSchedule &schedule);
  const DrawLog &log() const noexcept { return log_; }

private:
  PhiloxStream rng_;
  DrawLog log_;
};

} // namespace panoedit::curriculum
