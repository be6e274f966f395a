// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eigv/datagen/corpus.hpp"
#include "eigv/trainkit/trainkit.hpp"
#include "json.hpp"

namespace eigv::cli {

// Every knob of a run. The JSON form is flat: generator keys, training
// keys and paths share one namespace. The generator seed is "data_seed";
// "seed" drives initialization and training.
struct CliConfig {
  datagen::GenConfig gen;
  trainkit::TrainConfig train;
  std::filesystem::path corpus_dir = "corpus";
  std::filesystem::path checkpoint = "run/model.ckpt";
  std::filesystem::path out_dir = "run";
  bool paper_fidelity = false;  // hidden width 512
  std::size_t n_probes = 400;   // diagnostics probes

  void validate() const;
};

nlohmann::json to_json(const CliConfig& cfg);

// Builds a config from defaults, then EIGV_SEED (when `env_seed` is set),
// then the JSON object `file`, then "key=value" overrides. Unknown keys and
// type mismatches are rejected with the key named. The result is validated.
CliConfig resolve_config(const nlohmann::json& file, const std::vector<std::string>& overrides,
                         const std::optional<std::string>& env_seed = std::nullopt);

// Reads `path` (when given) and EIGV_SEED from the environment.
CliConfig parse_config(const std::optional<std::filesystem::path>& path,
                       const std::vector<std::string>& overrides);

// Writes the resolved config to <out_dir>/resolved_config.json; the file
// loads back through parse_config unchanged.
std::filesystem::path write_resolved(const CliConfig& cfg);

}  // namespace eigv::cli
