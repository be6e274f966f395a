// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include "eigv/error.hpp"

namespace eigv {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::kShapeMismatch: return "shape mismatch";
    case Errc::kNonFinite: return "non-finite value";
    case Errc::kInvalidArgument: return "invalid argument";
    case Errc::kDanglingNode: return "dangling node";
    case Errc::kCorruptData: return "corrupt data";
    case Errc::kUnsupportedVersion: return "unsupported version";
    case Errc::kIo: return "i/o error";
    case Errc::kConfig: return "configuration error";
    case Errc::kInsufficientBank: return "insufficient memory bank";
    case Errc::kEmptyInput: return "empty input";
    case Errc::kContractViolation: return "contract violation";
  }
  return "unknown error";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code) {}

}  // namespace eigv
