// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace panoedit {

// Philox4x32-10 counter-based generator (Salmon et al., Random123).
//
// Bit-stream used everywhere in this library:
//   key     = {seed & 0xffffffff, seed >> 32}
//   counter = {index & 0xffffffff, index >> 32, stream & 0xffffffff, stream >> 32}
// One block yields four 32-bit words w0..w3. Uniforms are formed from
// (w0 << 32 | w1) and (w2 << 32 | w3), keeping the top 53 bits.
// Standard normals use Box-Muller on a block: element 2i is r*cos(2*pi*u2)
// and element 2i+1 is r*sin(2*pi*u2) where block index = i,
// r = sqrt(-2 ln u1), u1 in (0, 1] from the first pair and u2 in [0, 1)
// from the second.
using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxBlock philox4x32_10(PhiloxBlock counter, PhiloxKey key) noexcept;

PhiloxBlock philox_block(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept;

/// Uniform in [0, 1) from the high 53 bits of (hi << 32 | lo).
double uniform_from_words(std::uint32_t hi, std::uint32_t lo) noexcept;

/// Element `index` of the standard-normal sequence for (seed, stream).
double philox_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept;

/// Sequential uniform draws over one (seed, stream) pair. Each block gives
/// two uniforms.
class PhiloxStream {
public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream) noexcept : seed_(seed), stream_(stream) {}

  double uniform() noexcept;
  double normal() noexcept;
  std::uint64_t draws() const noexcept { return draws_; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t draws_ = 0;
};

} // namespace panoedit
