// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#include "eigv/trainkit/model.hpp"

#include <algorithm>

namespace eigv::trainkit {

BatchInputs stack_inputs(std::span<const Tensor<float>* const> videos,
                         std::span<const Tensor<float>* const> questions) {
  if (videos.empty() || videos.size() != questions.size()) {
    throw Error(Errc::kEmptyInput, "stack_inputs: need matching, non-empty inputs");
  }
  const std::size_t clips = videos[0]->rows(), d_in = videos[0]->cols();
  const std::size_t length = questions[0]->rows(), d_q = questions[0]->cols();
  BatchInputs out;
  out.batch = videos.size();
  out.question_length = length;
  std::vector<float> v, q;
  v.reserve(out.batch * clips * d_in);
  q.reserve(out.batch * length * d_q);
  for (std::size_t i = 0; i < out.batch; ++i) {
    if (videos[i]->shape() != videos[0]->shape() || questions[i]->shape() != questions[0]->shape()) {
      throw Error(Errc::kShapeMismatch, "stack_inputs: ragged batch at sample " + std::to_string(i));
    }
    v.insert(v.end(), videos[i]->values().begin(), videos[i]->values().end());
    q.insert(q.end(), questions[i]->values().begin(), questions[i]->values().end());
  }
  out.videos = Tensor<float>({out.batch * clips, d_in}, std::move(v));
  out.questions = Tensor<float>({out.batch * length, d_q}, std::move(q));
  return out;
}

BatchInputs stack_inputs(const datagen::LabeledView& view, std::span<const std::size_t> ids) {
  std::vector<const Tensor<float>*> videos, questions;
  videos.reserve(ids.size());
  questions.reserve(ids.size());
  for (std::size_t i : ids) {
    videos.push_back(&view.video(i));
    questions.push_back(&view.question(i));
  }
  return stack_inputs(videos, questions);
}

EigvModel::EigvModel(ModelDims dims, backbone::RepresentationLayer layer)
    : dims_(dims),
      layer_(layer),
      video_(dims),
      question_(dims),
      grounding_(dims),
      backbone_(std::make_shared<backbone::AttentionBackbone<float>>(dims, layer)) {}

void EigvModel::init(std::uint64_t seed) {
  params_ = ParameterSet<float>{};
  numkit::RngStream rng(seed, "init");
  video_.init(params_, rng);
  question_.init(params_, rng);
  grounding_.init(params_, rng);
  backbone_->init(params_, rng);
}

Prediction EigvModel::predict(const BatchInputs& inputs) const {
  numkit::Tape<float> tape;
  const numkit::Binding<float> p(tape, params_, false);
  const auto v = video_.encode(p, tape.constant(inputs.videos));
  const auto q = question_.encode(p, tape.constant(inputs.questions), inputs.question_length);
  const auto partition = grounding_.ground(p, v, q, dims_.clips,
                                           grounding::GroundingMode::kHardDeterministic, nullptr);
  const auto out = backbone_->answer(p, v, q, dims_.clips);
  return Prediction{out.logits.value(), partition.scores.causal.value(),
                    partition.mask.causal_clips()};
}

}  // namespace eigv::trainkit
