// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include "core/error.hpp"

namespace panoedit {

const char *error_code_name(ErrorCode code) {
  switch (code) {
  case ErrorCode::InvalidArgument: return "invalid-argument";
  case ErrorCode::Domain: return "domain";
  case ErrorCode::Shape: return "shape";
  case ErrorCode::EmptyMask: return "empty-mask";
  case ErrorCode::EmptyRegion: return "empty-region";
  case ErrorCode::Io: return "io";
  case ErrorCode::Parse: return "parse";
  case ErrorCode::Contract: return "contract";
  case ErrorCode::PoleBBox: return "pole-bbox";
  case ErrorCode::Unsupported: return "unsupported";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string &message) {
  throw Error(code, message);
}

} // namespace panoedit
