// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace panoedit {

// Values mirror pe_status in panoedit.h.
enum class ErrorCode {
  InvalidArgument = 1,
  Domain = 2,
  Shape = 3,
  EmptyMask = 4,
  EmptyRegion = 5,
  Io = 6,
  Parse = 7,
  Contract = 8,
  PoleBBox = 9,
  Unsupported = 10,
};

const char *error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string &message);

inline void require(bool condition, ErrorCode code, const char *message) {
  if (!condition)
    fail(code, message);
}

} // namespace panoedit
