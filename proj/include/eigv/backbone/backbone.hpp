// Copyright (c) 2026 The eigv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>

#include "eigv/dims.hpp"
#include "eigv/numkit/parameters.hpp"
#include "eigv/numkit/rng.hpp"

namespace eigv::backbone {

using numkit::Binding;
using numkit::ParameterSet;
using numkit::RngStream;
using numkit::Var;

template <class T>
struct AnswerOutput {
  Var<T> representation;  // B x d, scored by the contrastive loss
  Var<T> logits;          // B x n_answers
};

// Model-agnostic answering function: any VideoQA model that maps a clip
// sequence and a question vector to answer logits can be plugged in by
// implementing this interface. Implementations must be deterministic and
// differentiable in all inputs and parameters.
template <class T>
class Backbone {
 public:
  virtual ~Backbone() = default;

  virtual void init(ParameterSet<T>& params, RngStream& rng) const = 0;

  // video: (B*K) x d stacked sample-major, question: B x d.
  virtual AnswerOutput<T> answer(const Binding<T>& params, Var<T> video, Var<T> question,
                                 std::size_t clips) const = 0;
};

enum class RepresentationLayer { kFused, kLogits };

// Reference backbone: question-conditioned attention pooling over clips,
// a tanh fusion layer and a linear answer head.
template <class T>
class AttentionBackbone final : public Backbone<T> {
 public:
  explicit AttentionBackbone(const ModelDims& dims,
                             RepresentationLayer layer = RepresentationLayer::kFused)
      : dims_(dims), layer_(layer) {}

  void init(ParameterSet<T>& params, RngStream& rng) const override;
  AnswerOutput<T> answer(const Binding<T>& params, Var<T> video, Var<T> question,
                         std::size_t clips) const override;

  // Attention weights over clips (B x K), exposed for inspection.
  Var<T> attention(const Binding<T>& params, Var<T> video, Var<T> question,
                   std::size_t clips) const;

 private:
  ModelDims dims_;
  RepresentationLayer layer_;
};

}  // namespace eigv::backbone
