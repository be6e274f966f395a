// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace eigv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

// Entry point of the `eigv` tool: synth, train, eval, explain, diag.
// Reports go to `out`, usage text and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eigv::cli
