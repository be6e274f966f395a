// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eigv/trainkit/model.hpp"
#include "json.hpp"

namespace eigv::trainkit {

enum class TrainMode { kEigv, kErmBaseline, kMixupBaseline };

std::string_view mode_name(TrainMode mode);
TrainMode parse_mode(std::string_view name);

struct TrainConfig {
  std::size_t epochs = 80;
  double lr = 5e-5;
  std::size_t patience = 5;
  double decay = 0.5;
  double lr_floor = 1e-6;
  std::size_t batch_size = 32;
  double beta = 0.75;
  double alpha = 1.0;         // Beta(alpha, alpha) for lambda0
  double tau_g = 1.0;         // Gumbel temperature
  double tau_c = 1.0;         // InfoNCE temperature
  bool normalize_cl = false;  // cosine instead of raw dot product
  std::size_t n_visual_negatives = 3;
  std::size_t n_question_negatives = 2;
  std::size_t bank_capacity = 512;
  std::uint64_t seed = 0;
  TrainMode mode = TrainMode::kEigv;
  std::size_t hidden = 64;  // d
  backbone::RepresentationLayer representation = backbone::RepresentationLayer::kFused;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double erm = 0.0;
  double cl = 0.0;
  double total = 0.0;
  double val_accuracy = 0.0;
  double lr = 0.0;
  std::size_t contrastive_batches = 0;
};

void to_json(nlohmann::json& j, const EpochRecord& r);

// Reduce-on-plateau on a metric where larger is better.
class PlateauSchedule {
 public:
  PlateauSchedule(std::size_t patience, double factor, double floor);

  // Feeds one epoch's metric; returns the learning rate for the next epoch.
  double step(double metric, double lr);

  std::size_t stalled_epochs() const noexcept { return stalled_; }
  std::optional<double> best() const noexcept { return best_; }

 private:
  std::size_t patience_;
  double factor_;
  double floor_;
  std::optional<double> best_;
  std::size_t stalled_ = 0;
};

// Replays the validation history through a PlateauSchedule and returns the
// rate following the last record, given the rate `lr` in effect during it.
double plateau_schedule(std::span<const EpochRecord> records, std::size_t patience,
                        double factor, double lr, double floor);

struct TrainResult {
  EigvModel model;
  std::vector<EpochRecord> history;
  std::vector<double> step_losses;  // total loss of every optimizer step
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Trains `model` in place on a labeled split. The split view carries no
// oracle annotations; validation accuracy drives the plateau schedule.
TrainResult train(EigvModel model, const datagen::LabeledView& train_split,
                  const datagen::LabeledView& val_split, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});

struct Metrics {
  std::size_t samples = 0;
  std::optional<double> accuracy;
  std::optional<double> grounding_iou;
  std::optional<double> invariance_gap;
  std::optional<double> equivariance_score;
};

void to_json(nlohmann::json& j, const Metrics& m);

// |a & b| / |a | b|; two empty sets count as identical.
double mask_iou(const std::vector<bool>& predicted, const std::vector<bool>& truth);

double accuracy(const EigvModel& model, const datagen::LabeledView& split);

// Accuracy and mean grounding IoU against the split's oracle masks.
Metrics evaluate(const EigvModel& model, const datagen::Corpus& split);

// Invariance gap: mean total-variation distance between the answer
// distribution before and after swapping the oracle environment clips with
// a partner's. Equivariance score: fraction of probes whose prediction moves
// to the partner's answer when the oracle causal clips and the question are
// taken from a partner with a different answer.
struct ProbeOptions {
  // Use the probe sample itself as the swap source.
  bool self_swap = false;
};

Metrics diagnostics(const EigvModel& model, const datagen::Corpus& split, std::size_t n_probes,
                    numkit::RngStream& rng, const ProbeOptions& options = {});

// Checkpoint: "EIGVCKPT", version byte, u32 header length, JSON header,
// then each parameter as little-endian 32-bit floats in header order.
inline constexpr char kCheckpointMagic[8] = {'E', 'I', 'G', 'V', 'C', 'K', 'P', 'T'};
inline constexpr unsigned char kCheckpointVersion = 1;

void save_checkpoint(const EigvModel& model, const std::filesystem::path& path);
// With `expected`, every dimension must match; the error names the field.
EigvModel load_checkpoint(const std::filesystem::path& path,
                          const std::optional<ModelDims>& expected = std::nullopt);

std::string config_hash(const ModelDims& dims, backbone::RepresentationLayer layer);

ModelDims model_dims(const datagen::GenConfig& gen, const TrainConfig& cfg);

}  // namespace eigv::trainkit
