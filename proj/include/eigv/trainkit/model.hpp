// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <span>
#include <vector>

#include "eigv/backbone/backbone.hpp"
#include "eigv/datagen/corpus.hpp"
#include "eigv/dims.hpp"
#include "eigv/encoders/encoders.hpp"
#include "eigv/grounding/grounding.hpp"

namespace eigv::trainkit {

using numkit::ParameterSet;
using numkit::Tensor;

// Raw inputs of a batch stacked sample-major.
struct BatchInputs {
  Tensor<float> videos;     // (B*K) x d_in
  Tensor<float> questions;  // (B*L) x d_q
  std::size_t batch = 0;
  std::size_t question_length = 0;
};

BatchInputs stack_inputs(std::span<const Tensor<float>* const> videos,
                         std::span<const Tensor<float>* const> questions);
BatchInputs stack_inputs(const datagen::LabeledView& view, std::span<const std::size_t> ids);

struct Prediction {
  Tensor<float> logits;         // B x n_answers
  Tensor<float> causal_scores;  // p_c, B x K
  std::vector<bool> causal;     // deterministic mask, B*K flags
};

// Encoders, grounding indicator and backbone with one parameter set. The
// model trains in 32-bit floats.
class EigvModel {
 public:
  explicit EigvModel(ModelDims dims,
                     backbone::RepresentationLayer layer = backbone::RepresentationLayer::kFused);

  // Draws fresh parameters.
  void init(std::uint64_t seed);

  const ModelDims& dims() const noexcept { return dims_; }
  backbone::RepresentationLayer representation_layer() const noexcept { return layer_; }
  ParameterSet<float>& params() noexcept { return params_; }
  const ParameterSet<float>& params() const noexcept { return params_; }

  const encoders::VideoEncoder<float>& video_encoder() const noexcept { return video_; }
  const encoders::QuestionEncoder<float>& question_encoder() const noexcept { return question_; }
  const grounding::GroundingIndicator<float>& grounding() const noexcept { return grounding_; }
  const backbone::Backbone<float>& backbone() const noexcept { return *backbone_; }

  // Inference path: encode, deterministic grounding for the explanation, and
  // the backbone on the full video. Draws no random numbers.
  Prediction predict(const BatchInputs& inputs) const;

 private:
  ModelDims dims_;
  backbone::RepresentationLayer layer_;
  ParameterSet<float> params_;
  encoders::VideoEncoder<float> video_;
  encoders::QuestionEncoder<float> question_;
  grounding::GroundingIndicator<float> grounding_;
  std::shared_ptr<const backbone::Backbone<float>> backbone_;
};

}  // namespace eigv::trainkit
