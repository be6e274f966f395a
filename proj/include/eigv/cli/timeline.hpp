// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eigv/trainkit/model.hpp"

namespace eigv::cli {

struct TimelineSegment {
  std::size_t clip_index = 0;
  bool causal = false;  // deterministic grounding assignment
  double p_c = 0.0;
  std::optional<bool> truth_causal;
};

// Per-clip grounding of one sample, rendered as a bar strip.
struct TimelineExport {
  std::size_t sample_id = 0;
  int answer = 0;
  int predicted = 0;
  std::vector<TimelineSegment> segments;  // one per clip
};

TimelineExport make_timeline(const trainkit::EigvModel& model, const datagen::Sample& sample,
                             std::size_t sample_id, bool with_truth = true);

// Columns: sample_id, clip_index, assignment, p_c, truth_causal.
std::string render_csv(const TimelineExport& t);
std::string render_svg(const TimelineExport& t);

// Writes <stem>.csv and <stem>.svg under `dir`; returns both paths.
std::vector<std::filesystem::path> write_timeline(const TimelineExport& t,
                                                  const std::filesystem::path& dir,
                                                  const std::string& stem);

}  // namespace eigv::cli
