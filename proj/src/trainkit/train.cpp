// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <string>

#include "eigv/intervention/intervention.hpp"
#include "eigv/numkit/adam.hpp"
#include "eigv/numkit/ops.hpp"
#include "eigv/objective/objective.hpp"
#include "eigv/trainkit/trainkit.hpp"

namespace eigv::trainkit {

namespace ops = numkit::ops;
using grounding::GroundingMode;
using intervention::BankClip;
using intervention::BankFilter;
using intervention::CausalFactors;
using intervention::MemoryBank;
using numkit::Binding;
using numkit::RngStream;
using numkit::Tape;
using numkit::Var;

std::string_view mode_name(TrainMode mode) {
  switch (mode) {
    case TrainMode::kEigv: return "eigv";
    case TrainMode::kErmBaseline: return "erm-baseline";
    case TrainMode::kMixupBaseline: return "mixup-baseline";
  }
  return "eigv";
}

TrainMode parse_mode(std::string_view name) {
  for (TrainMode m : {TrainMode::kEigv, TrainMode::kErmBaseline, TrainMode::kMixupBaseline}) {
    if (mode_name(m) == name) return m;
  }
  throw Error(Errc::kConfig, "unknown mode " + std::string(name));
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(Errc::kConfig, what);
  };
  require(epochs >= 1, "epochs must be positive");
  require(lr > 0.0, "lr must be positive");
  require(patience >= 1, "patience must be at least 1");
  require(decay > 0.0 && decay <= 1.0, "decay must lie in (0, 1]");
  require(lr_floor > 0.0, "lr_floor must be positive");
  require(batch_size >= 2, "batch_size must be at least 2");
  require(beta >= 0.0, "beta must be non-negative");
  require(alpha > 0.0, "alpha must be positive");
  require(tau_g > 0.0, "tau_g must be positive");
  require(tau_c > 0.0, "tau_c must be positive");
  require(n_visual_negatives + n_question_negatives >= 1,
          "n_visual_negatives + n_question_negatives must be at least 1");
  require(bank_capacity >= 1, "bank_capacity must be positive");
  require(hidden >= 1, "hidden must be positive");
  require(adam_beta1 >= 0.0 && adam_beta1 < 1.0, "adam_beta1 must lie in [0, 1)");
  require(adam_beta2 >= 0.0 && adam_beta2 < 1.0, "adam_beta2 must lie in [0, 1)");
  require(adam_eps > 0.0, "adam_eps must be positive");
}

ModelDims model_dims(const datagen::GenConfig& gen, const TrainConfig& cfg) {
  return ModelDims{gen.clips, gen.d_in, gen.d_q, cfg.hidden, gen.n_answers};
}

void to_json(nlohmann::json& j, const EpochRecord& r) {
  j = nlohmann::json{{"epoch", r.epoch},
                     {"erm", r.erm},
                     {"cl", r.cl},
                     {"total", r.total},
                     {"val_accuracy", r.val_accuracy},
                     {"lr", r.lr},
                     {"contrastive_batches", r.contrastive_batches}};
}

PlateauSchedule::PlateauSchedule(std::size_t patience, double factor, double floor)
    : patience_(patience), factor_(factor), floor_(floor) {
  if (patience == 0) throw Error(Errc::kInvalidArgument, "patience must be at least 1");
}

double PlateauSchedule::step(double metric, double lr) {
  if (!best_ || metric > *best_) {
    best_ = metric;
    stalled_ = 0;
    return lr;
  }
  if (++stalled_ >= patience_) {
    stalled_ = 0;
    return std::max(lr * factor_, floor_);
  }
  return lr;
}

double plateau_schedule(std::span<const EpochRecord> records, std::size_t patience,
                        double factor, double lr, double floor) {
  PlateauSchedule schedule(patience, factor, floor);
  double next = lr;
  for (const auto& r : records) next = schedule.step(r.val_accuracy, lr);
  return records.empty() ? lr : next;
}

namespace {

struct StepLoss {
  double erm = 0.0;
  double cl = 0.0;
  double total = 0.0;
  bool contrastive = false;
};

Tensor<float> one_hot(std::span<const int> labels, std::size_t classes) {
  Tensor<float> out({labels.size(), classes});
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i * classes + static_cast<std::size_t>(labels[i])] = 1.0f;
  }
  return out;
}

std::vector<std::size_t> clip_rows(std::span<const std::size_t> samples, std::size_t clips) {
  std::vector<std::size_t> rows;
  rows.reserve(samples.size() * clips);
  for (std::size_t s : samples)
    for (std::size_t k = 0; k < clips; ++k) rows.push_back(s * clips + k);
  return rows;
}

int argmax_row(std::span<const float> row) {
  return static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
}

class Trainer {
 public:
  Trainer(EigvModel& model, const datagen::LabeledView& data, const TrainConfig& cfg)
      : model_(model),
        data_(data),
        cfg_(cfg),
        dims_(model.dims()),
        bank_(cfg.bank_capacity),
        warmup_(std::max(dims_.clips, cfg.n_visual_negatives * data.config().n_causal_clips)),
        adam_(model.params().size()) {}

  StepLoss step(std::span<const std::size_t> ids, RngStream& rng, double lr);

 private:
  Var<float> eigv_objective(Tape<float>& tape, const Binding<float>& p, Var<float> v, Var<float> q,
                            Var<float> y, std::span<const int> labels,
                            std::span<const std::size_t> ids, RngStream& rng, StepLoss& out);

  EigvModel& model_;
  const datagen::LabeledView& data_;
  const TrainConfig& cfg_;
  ModelDims dims_;
  MemoryBank<float> bank_;
  std::size_t warmup_;
  std::vector<numkit::AdamState<float>> adam_;
};

StepLoss Trainer::step(std::span<const std::size_t> ids, RngStream& rng, double lr) {
  const std::size_t batch = ids.size();
  const std::size_t clips = dims_.clips;
  const BatchInputs inputs = stack_inputs(data_, ids);
  std::vector<int> labels(batch);
  for (std::size_t b = 0; b < batch; ++b) labels[b] = data_.answer(ids[b]);

  Tape<float> tape;
  const Binding<float> p(tape, model_.params(), true);
  const Var<float> v = model_.video_encoder().encode(p, tape.constant(inputs.videos));
  const Var<float> q =
      model_.question_encoder().encode(p, tape.constant(inputs.questions), inputs.question_length);
  const Var<float> y = tape.constant(one_hot(labels, dims_.n_answers));

  StepLoss out;
  Var<float> loss;
  switch (cfg_.mode) {
    case TrainMode::kErmBaseline: {
      const auto answer = model_.backbone().answer(p, v, q, clips);
      loss = objective::soft_cross_entropy(answer.logits, y);
      out.erm = loss.value().item();
      break;
    }
    case TrainMode::kMixupBaseline: {
      auto draw_rng = rng.derive("draws");
      const auto draws = intervention::draw_interventions(batch, cfg_.alpha, draw_rng);
      std::vector<std::size_t> partner(batch);
      std::vector<double> lambda0(batch);
      for (std::size_t b = 0; b < batch; ++b) {
        partner[b] = draws[b].partner;
        lambda0[b] = draws[b].lambda0;
      }
      const CausalFactors<float> whole{v, q, y};
      const auto mixed = intervention::e_intervene(
          whole, intervention::gather_partners(whole, partner, clips), lambda0, clips);
      const auto answer = model_.backbone().answer(p, mixed.causal, mixed.question, clips);
      loss = objective::soft_cross_entropy(answer.logits, mixed.label);
      out.erm = loss.value().item();
      break;
    }
    case TrainMode::kEigv:
      loss = eigv_objective(tape, p, v, q, y, labels, ids, rng, out);
      break;
  }
  out.total = loss.value().item();

  const auto grads = numkit::backward(tape, loss);
  numkit::AdamOptions options{lr, cfg_.adam_beta1, cfg_.adam_beta2, cfg_.adam_eps};
  auto& entries = model_.params().entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto update = numkit::adam_step(entries[i].value, grads.at(p.vars()[i].second), adam_[i], options);
    entries[i].value = std::move(update.param);
    adam_[i] = std::move(update.state);
  }
  return out;
}

Var<float> Trainer::eigv_objective(Tape<float>& tape, const Binding<float>& p, Var<float> v,
                                   Var<float> q, Var<float> y, std::span<const int> labels,
                                   std::span<const std::size_t> ids, RngStream& rng,
                                   StepLoss& out) {
  const std::size_t batch = ids.size();
  const std::size_t clips = dims_.clips;
  const auto& grounder = model_.grounding();
  const auto& answerer = model_.backbone();

  // Ground, then intervene on both scenes with one partner per sample.
  auto ground_rng = rng.derive("ground");
  const auto partition =
      grounder.ground(p, v, q, clips, GroundingMode::kHardStochastic, &ground_rng, cfg_.tau_g);
  auto draw_rng = rng.derive("draws");
  const auto draws = intervention::draw_interventions(batch, cfg_.alpha, draw_rng);
  std::vector<std::size_t> partner(batch);
  std::vector<double> lambda0(batch), lambda1(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    partner[b] = draws[b].partner;
    lambda0[b] = draws[b].lambda0;
    lambda1[b] = draws[b].lambda1;
  }
  const CausalFactors<float> anchor{partition.causal, q, y};
  const auto mixed = intervention::e_intervene(
      anchor, intervention::gather_partners(anchor, partner, clips), lambda0, clips);
  const auto partner_rows = clip_rows(partner, clips);
  const Var<float> env_star = intervention::i_intervene(
      partition.environment,
      ops::gather_rows(partition.environment, std::span<const std::size_t>(partner_rows)),
      lambda1, clips);
  const Var<float> v_star = intervention::compose_video(mixed.causal, env_star);

  const auto answer = answerer.answer(p, v_star, mixed.question, clips);
  const Var<float> erm = objective::soft_cross_entropy(answer.logits, mixed.label);

  // This batch's environment clips enter the bank before disruption.
  {
    const auto causal = partition.mask.causal_clips();
    const auto& values = v.value();
    std::vector<BankClip<float>> clips_out;
    for (std::size_t r = 0; r < causal.size(); ++r) {
      if (causal[r]) continue;
      const auto row = values.row(r);
      BankClip<float> c;
      c.feature.assign(row.begin(), row.end());
      c.assignment = intervention::ClipAssignment::kEnvironment;
      c.source_label = labels[r / clips];
      c.source_id = ids[r / clips];
      clips_out.push_back(std::move(c));
    }
    bank_.push(clips_out);
  }

  Var<float> cl = tape.constant(Tensor<float>::scalar(0.0f));
  if (bank_.size() >= warmup_) {
    const auto regrounded = grounder.ground(p, v_star, mixed.question, clips,
                                            GroundingMode::kHardDeterministic, nullptr);
    const auto causal_star = regrounded.mask.causal_clips();
    const auto& soft_labels = mixed.label.value();

    std::vector<std::size_t> included;
    std::vector<BankFilter> filters;
    std::vector<int> anchor_labels;
    std::vector<bool> included_mask;
    for (std::size_t b = 0; b < batch; ++b) {
      const int dominant = argmax_row(soft_labels.row(b));
      BankFilter f;
      f.anchor_label = dominant;
      f.excluded_sources = {ids[b], ids[partner[b]]};
      std::size_t n_causal = 0;
      for (std::size_t k = 0; k < clips; ++k) n_causal += causal_star[b * clips + k] ? 1 : 0;
      const bool pool_ok =
          cfg_.n_question_negatives == 0 ||
          std::any_of(labels.begin(), labels.end(), [&](int l) { return l != dominant; });
      BankFilter visual;
      visual.excluded_sources = f.excluded_sources;
      const bool bank_ok = bank_.count_eligible(f) >= clips - n_causal &&
                           (cfg_.n_visual_negatives == 0 || bank_.count_eligible(visual) >= n_causal);
      if (!pool_ok || !bank_ok) continue;
      included.push_back(b);
      filters.push_back(std::move(f));
      anchor_labels.push_back(dominant);
      for (std::size_t k = 0; k < clips; ++k) included_mask.push_back(causal_star[b * clips + k]);
    }

    if (!included.empty()) {
      const auto rows = clip_rows(included, clips);
      const Var<float> v_sel = ops::gather_rows(v_star, std::span<const std::size_t>(rows));
      const Var<float> q_sel = ops::gather_rows(mixed.question, std::span<const std::size_t>(included));
      const Var<float> a = ops::gather_rows(answer.representation, std::span<const std::size_t>(included));

      auto disrupt_rng = rng.derive("disrupt");
      const Var<float> v_pos = intervention::make_positive(
          v_sel, included_mask, std::span<const BankFilter>(filters), bank_, disrupt_rng, clips);
      const intervention::QuestionPool<float> pool{q, std::vector<int>(labels.begin(), labels.end())};
      const auto negatives = intervention::make_negatives(
          v_sel, q_sel, included_mask, std::span<const BankFilter>(filters), bank_, pool,
          std::span<const int>(anchor_labels), cfg_.n_visual_negatives, cfg_.n_question_negatives,
          disrupt_rng, clips);

      const Var<float> a_pos = answerer.answer(p, v_pos, q_sel, clips).representation;
      std::vector<Var<float>> a_neg;
      a_neg.reserve(negatives.size());
      for (const auto& n : negatives) {
        a_neg.push_back(answerer.answer(p, n.video, n.question, clips).representation);
      }
      cl = objective::info_nce(a, a_pos, std::span<const Var<float>>(a_neg),
                               objective::InfoNceOptions{cfg_.tau_c, cfg_.normalize_cl});
      out.contrastive = true;
    }
  }

  const auto losses = objective::eigv_loss(erm, cl, cfg_.beta);
  out.erm = erm.value().item();
  out.cl = cl.value().item();
  return losses.total;
}

}  // namespace

TrainResult train(EigvModel model, const datagen::LabeledView& train_split,
                  const datagen::LabeledView& val_split, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
  cfg.validate();
  if (train_split.size() < 2) throw Error(Errc::kEmptyInput, "training split needs 2+ samples");
  if (val_split.size() == 0) throw Error(Errc::kEmptyInput, "validation split is empty");
  if (cfg.batch_size < 2) throw Error(Errc::kConfig, "batch_size must be at least 2");

  TrainResult result{std::move(model), {}, {}};
  Trainer trainer(result.model, train_split, cfg);
  PlateauSchedule schedule(cfg.patience, cfg.decay, cfg.lr_floor);
  const RngStream base(cfg.seed, "train");

  double lr = cfg.lr;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto batches = datagen::batch_iter(
        train_split.size(), cfg.batch_size, numkit::splitmix64(cfg.seed ^ numkit::splitmix64(epoch)));
    EpochRecord record;
    record.epoch = epoch;
    record.lr = lr;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      RngStream rng = base.derive("epoch" + std::to_string(epoch) + "/batch" + std::to_string(b));
      StepLoss loss;
      try {
        loss = trainer.step(batches[b], rng, lr);
      } catch (const Error& e) {
        if (e.code() != Errc::kNonFinite) throw;
        throw Error(Errc::kNonFinite, "training aborted at epoch " + std::to_string(epoch) +
                                          ", batch " + std::to_string(b) + " (" + e.what() + ")");
      }
      record.erm += loss.erm;
      record.cl += loss.cl;
      record.total += loss.total;
      record.contrastive_batches += loss.contrastive ? 1 : 0;
      result.step_losses.push_back(loss.total);
    }
    const double n = static_cast<double>(std::max<std::size_t>(batches.size(), 1));
    record.erm /= n;
    record.cl /= n;
    record.total /= n;
    record.val_accuracy = accuracy(result.model, val_split);
    result.history.push_back(record);
    if (on_epoch) on_epoch(record);
    lr = schedule.step(record.val_accuracy, lr);
  }
  return result;
}

}  // namespace eigv::trainkit
