// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include "core/philox.hpp"

#include <cmath>
#include <numbers>

namespace panoedit {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &hi, std::uint32_t &lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
inline std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

} // namespace

PhiloxBlock philox4x32_10(PhiloxBlock ctr, PhiloxKey key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

PhiloxBlock philox_block(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
  return philox4x32_10({lo32(index), hi32(index), lo32(stream), hi32(stream)},
                       {lo32(seed), hi32(seed)});
}

double uniform_from_words(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return static_cast<double>(bits >> 11) * 0x1p-53;
}

double philox_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
  const PhiloxBlock b = philox_block(seed, stream, index / 2);
  const double u1 = uniform_from_words(b[0], b[1]) + 0x1p-53; // (0, 1]
  const double u2 = uniform_from_words(b[2], b[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return (index % 2 == 0) ? r * std::cos(theta) : r * std::sin(theta);
}

double PhiloxStream::uniform() noexcept {
  const PhiloxBlock b = philox_block(seed_, stream_, draws_ / 2);
  const double u = (draws_ % 2 == 0) ? uniform_from_words(b[0], b[1]) : uniform_from_words(b[2], b[3]);
  ++draws_;
  return u;
}

double PhiloxStream::normal() noexcept {
  // Normals live on their own counter range so mixing calls stays reproducible.
  const double z = philox_normal(seed_, stream_ ^ 0x8000000000000000ull, draws_);
  ++draws_;
  return z;
}

} // namespace panoedit
