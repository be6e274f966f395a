// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eigv/trainkit/trainkit.hpp"

namespace eigv::trainkit {

namespace {

constexpr std::size_t kChunk = 64;

std::vector<std::size_t> range(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> ids(end - begin);
  std::iota(ids.begin(), ids.end(), begin);
  return ids;
}

int argmax_row(std::span<const float> row) {
  return static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
}

std::vector<double> softmax_row(std::span<const float> row) {
  const double peak = *std::max_element(row.begin(), row.end());
  std::vector<double> p(row.size());
  double z = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) z += p[i] = std::exp(row[i] - peak);
  for (double& x : p) x /= z;
  return p;
}

// Copies the clips of `source` at positions where `source_mask == want`
// into `target` at positions where `target_mask == want`, in order.
void transplant(Tensor<float>& target, const std::vector<bool>& target_mask,
                const Tensor<float>& source, const std::vector<bool>& source_mask, bool want) {
  std::vector<std::size_t> from, to;
  for (std::size_t k = 0; k < source_mask.size(); ++k)
    if (source_mask[k] == want) from.push_back(k);
  for (std::size_t k = 0; k < target_mask.size(); ++k)
    if (target_mask[k] == want) to.push_back(k);
  const std::size_t n = std::min(from.size(), to.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto src = source.row(from[i]);
    std::copy(src.begin(), src.end(), target.row(to[i]).begin());
  }
}

}  // namespace

void to_json(nlohmann::json& j, const Metrics& m) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  j = nlohmann::json{{"samples", m.samples},
                     {"accuracy", opt(m.accuracy)},
                     {"grounding_iou", opt(m.grounding_iou)},
                     {"invariance_gap", opt(m.invariance_gap)},
                     {"equivariance_score", opt(m.equivariance_score)}};
}

double mask_iou(const std::vector<bool>& predicted, const std::vector<bool>& truth) {
  if (predicted.size() != truth.size()) {
    throw Error(Errc::kShapeMismatch, "mask_iou: masks of length " +
                                          std::to_string(predicted.size()) + " and " +
                                          std::to_string(truth.size()));
  }
  std::size_t both = 0, either = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    both += predicted[i] && truth[i];
    either += predicted[i] || truth[i];
  }
  return either == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(either);
}

double accuracy(const EigvModel& model, const datagen::LabeledView& split) {
  if (split.size() == 0) throw Error(Errc::kEmptyInput, "accuracy: empty split");
  std::size_t correct = 0;
  for (std::size_t begin = 0; begin < split.size(); begin += kChunk) {
    const auto ids = range(begin, std::min(split.size(), begin + kChunk));
    const auto pred = model.predict(stack_inputs(split, ids));
    for (std::size_t b = 0; b < ids.size(); ++b) {
      correct += argmax_row(pred.logits.row(b)) == split.answer(ids[b]);
    }
  }
  return static_cast<double>(correct) / static_cast<double>(split.size());
}

Metrics evaluate(const EigvModel& model, const datagen::Corpus& split) {
  if (split.size() == 0) throw Error(Errc::kEmptyInput, "evaluate: empty split");
  const datagen::LabeledView view(split);
  const std::size_t clips = model.dims().clips;
  std::size_t correct = 0;
  double iou = 0.0;
  for (std::size_t begin = 0; begin < split.size(); begin += kChunk) {
    const auto ids = range(begin, std::min(split.size(), begin + kChunk));
    const auto pred = model.predict(stack_inputs(view, ids));
    for (std::size_t b = 0; b < ids.size(); ++b) {
      const auto& s = split.samples[ids[b]];
      correct += argmax_row(pred.logits.row(b)) == s.answer;
      const std::vector<bool> mask(pred.causal.begin() + b * clips,
                                   pred.causal.begin() + (b + 1) * clips);
      iou += mask_iou(mask, s.truth_mask);
    }
  }
  const double n = static_cast<double>(split.size());
  Metrics m;
  m.samples = split.size();
  m.accuracy = correct / n;
  m.grounding_iou = iou / n;
  return m;
}

Metrics diagnostics(const EigvModel& model, const datagen::Corpus& split, std::size_t n_probes,
                    numkit::RngStream& rng, const ProbeOptions& options) {
  if (split.size() < 2 && !options.self_swap) {
    throw Error(Errc::kEmptyInput, "diagnostics: need at least two samples");
  }
  if (split.size() == 0 || n_probes == 0) throw Error(Errc::kEmptyInput, "diagnostics: no probes");

  auto predict_one = [&](const Tensor<float>& video, const Tensor<float>& question) {
    const Tensor<float>* v = &video;
    const Tensor<float>* q = &question;
    return model.predict(stack_inputs(std::span(&v, 1), std::span(&q, 1))).logits;
  };

  double gap = 0.0;
  std::size_t moved = 0, equi_probes = 0;
  for (std::size_t p = 0; p < n_probes; ++p) {
    const std::size_t i = rng.below(split.size());
    const auto& anchor = split.samples[i];
    const auto base = softmax_row(predict_one(anchor.video, anchor.question).row(0));

    // Invariance: replace the environment with another sample's.
    std::size_t j = i;
    if (!options.self_swap) {
      j = rng.below(split.size() - 1);
      if (j >= i) ++j;
    }
    Tensor<float> env_swapped = anchor.video;
    transplant(env_swapped, anchor.truth_mask, split.samples[j].video, split.samples[j].truth_mask,
               false);
    const auto swapped = softmax_row(predict_one(env_swapped, anchor.question).row(0));
    double tv = 0.0;
    for (std::size_t a = 0; a < base.size(); ++a) tv += std::abs(base[a] - swapped[a]);
    gap += 0.5 * tv;

    // Equivariance: take the causal clips and question of a sample with a
    // different answer.
    std::size_t src = i;
    if (!options.self_swap) {
      std::vector<std::size_t> others;
      for (std::size_t k = 0; k < split.size(); ++k)
        if (split.samples[k].answer != anchor.answer) others.push_back(k);
      if (others.empty()) continue;
      src = others[rng.below(others.size())];
    }
    const auto& source = split.samples[src];
    Tensor<float> causal_swapped = anchor.video;
    transplant(causal_swapped, anchor.truth_mask, source.video, source.truth_mask, true);
    const auto logits = predict_one(causal_swapped, source.question);
    moved += argmax_row(logits.row(0)) == source.answer;
    ++equi_probes;
  }

  Metrics m;
  m.samples = n_probes;
  m.invariance_gap = gap / static_cast<double>(n_probes);
  if (equi_probes > 0) m.equivariance_score = static_cast<double>(moved) / equi_probes;
  return m;
}

}  // namespace eigv::trainkit
