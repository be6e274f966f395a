// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace eigv {

enum class Errc {
  kShapeMismatch,
  kNonFinite,
  kInvalidArgument,
  kDanglingNode,
  kCorruptData,
  kUnsupportedVersion,
  kIo,
  kConfig,
  kInsufficientBank,
  kEmptyInput,
  kContractViolation,
};

const char* errc_name(Errc code) noexcept;

// Every library failure is reported through this one exception type; the
// code distinguishes the category and the message names the offending item.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace eigv
